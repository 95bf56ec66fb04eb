#include "actigate/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "actigate/rng.hpp"

namespace actigate {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::int64_t ScenarioSpec::frame_count() const {
    const double exact = duration_seconds * fps.to_double();
    const std::int64_t frames = std::llround(exact);
    if (std::abs(exact - static_cast<double>(frames)) > 1e-6)
        throw ConfigError("scenario duration must be a whole number of frames");
    return frames;
}

namespace {

struct PlacedRect {
    int x = 0, y = 0, w = 0, h = 0;
    int intensity = 0;
    ObjectClass class_id = ObjectClass::Car;

    friend bool operator==(const PlacedRect& a, const PlacedRect& b) {
        return a.x == b.x && a.y == b.y && a.w == b.w && a.h == b.h &&
               a.intensity == b.intensity && a.class_id == b.class_id;
    }
};

bool event_active(const ObjectEvent& ev, double t) {
    return t >= ev.enter_time && t < ev.exit_time;
}

bool wind_active_at(const WindSpec& wind, double t) {
    if (!wind.enabled)
        return false;
    for (const auto& [start, end] : wind.active_intervals)
        if (t >= start && t < end)
            return true;
    return false;
}

PlacedRect place_event(const ObjectEvent& ev, double t, int canvas_w, int canvas_h) {
    const double span = ev.exit_time - ev.enter_time;
    const double u = span > 0.0 ? (t - ev.enter_time) / span : 0.0;
    const double fx = ev.from_x + (ev.to_x - ev.from_x) * u;
    const double fy = ev.from_y + (ev.to_y - ev.from_y) * u;
    PlacedRect r;
    r.w = ev.width;
    r.h = ev.height;
    r.x = std::clamp(static_cast<int>(std::floor(fx + 0.5)), 0, canvas_w - ev.width);
    r.y = std::clamp(static_cast<int>(std::floor(fy + 0.5)), 0, canvas_h - ev.height);
    r.intensity = ev.intensity;
    r.class_id = ev.class_id;
    return r;
}

std::vector<PlacedRect> rects_at(const ScenarioSpec& spec, double t) {
    std::vector<PlacedRect> rects;
    for (const ObjectEvent& ev : spec.objects)
        if (event_active(ev, t))
            rects.push_back(place_event(ev, t, spec.width, spec.height));
    return rects;
}

class ScenarioStream final : public FrameSource {
  public:
    ScenarioStream(ScenarioSpec spec, StreamInfo info)
        : spec_(std::move(spec)), info_(std::move(info)) {}

    const StreamInfo& info() const override { return info_; }

    std::optional<Frame> next() override {
        if (index_ >= *info_.frame_count)
            return std::nullopt;
        Frame frame = render(spec_, index_);
        ++index_;
        return frame;
    }

    static Frame render(const ScenarioSpec& spec, std::int64_t index) {
        Frame frame;
        frame.index = index;
        frame.timestamp = frame_timestamp(index, spec.fps);
        frame.width = spec.width;
        frame.height = spec.height;
        frame.channels = 1;
        const double t = frame.timestamp.to_double();
        frame.pixels.assign(static_cast<std::size_t>(spec.width) * spec.height,
                            static_cast<std::uint8_t>(spec.background));

        if (wind_active_at(spec.wind, t) && spec.wind.intensity > 0) {
            std::mt19937_64 rng(mix_seed(spec.seed, static_cast<std::uint64_t>(index)));
            const int amp = spec.wind.intensity;
            for (std::uint8_t& px : frame.pixels) {
                const int jitter = static_cast<int>(uniform_int(rng, -amp, amp));
                px = static_cast<std::uint8_t>(std::clamp(static_cast<int>(px) + jitter, 0, 255));
            }
        }

        for (const PlacedRect& r : rects_at(spec, t)) {
            for (int yy = r.y; yy < r.y + r.h; ++yy) {
                std::uint8_t* row = frame.pixels.data() + static_cast<std::size_t>(yy) * spec.width;
                std::fill(row + r.x, row + r.x + r.w, static_cast<std::uint8_t>(r.intensity));
            }
        }
        return frame;
    }

  private:
    ScenarioSpec spec_;
    StreamInfo info_;
    std::int64_t index_ = 0;
};

} // namespace

void validate_scenario(const ScenarioSpec& spec) {
    if (spec.width <= 0 || spec.height <= 0)
        throw ConfigError("scenario canvas dimensions must be positive");
    if (spec.duration_seconds < 0)
        throw ConfigError("scenario duration must be nonnegative");
    if (spec.fps.num <= 0)
        throw ConfigError("scenario fps must be positive");
    if (spec.background < 0 || spec.background > 255)
        throw ConfigError("scenario background must be an 8-bit level");
    for (std::size_t i = 0; i < spec.objects.size(); ++i) {
        const ObjectEvent& ev = spec.objects[i];
        const std::string which = "object event " + std::to_string(i);
        if (!(ev.enter_time < ev.exit_time))
            throw ConfigError(which + ": enter_time must be before exit_time");
        if (ev.exit_time > spec.duration_seconds)
            throw ConfigError(which + ": exit_time exceeds scenario duration");
        if (ev.width <= 0 || ev.height <= 0)
            throw ConfigError(which + ": object size must be positive");
        if (ev.width > spec.width || ev.height > spec.height)
            throw ConfigError(which + ": object does not fit on canvas even after clamping");
        if (ev.intensity < 0 || ev.intensity > 255)
            throw ConfigError(which + ": intensity must be an 8-bit level");
    }
    if (spec.wind.enabled) {
        if (spec.wind.intensity < 0 || spec.wind.intensity > 255)
            throw ConfigError("wind intensity must be in [0, 255]");
        for (const auto& [start, end] : spec.wind.active_intervals)
            if (!(start <= end))
                throw ConfigError("wind interval must have start <= end");
    }
    spec.frame_count(); // throws when duration*fps is not integral
}

Scenario generate_scenario(const ScenarioSpec& spec) {
    validate_scenario(spec);
    Scenario scenario;
    scenario.spec = spec;

    const std::int64_t frames = spec.frame_count();
    scenario.truth.entries.resize(static_cast<std::size_t>(frames));
    scenario.script.seed = spec.seed;

    std::vector<PlacedRect> prev_rects;
    for (std::int64_t i = 0; i < frames; ++i) {
        const double t = frame_timestamp(i, spec.fps).to_double();
        const std::vector<PlacedRect> rects = rects_at(spec, t);

        GroundTruthEntry& entry = scenario.truth.entries[static_cast<std::size_t>(i)];
        entry.wind_active = wind_active_at(spec.wind, t);
        entry.motion_expected = i > 0 && !(rects == prev_rects);
        std::vector<Detection> dets;
        for (const PlacedRect& r : rects) {
            const BBox box{static_cast<double>(r.x), static_cast<double>(r.y),
                           static_cast<double>(r.w), static_cast<double>(r.h)};
            entry.objects.emplace_back(r.class_id, box);
            dets.push_back(Detection{r.class_id, 1.0, box});
        }
        if (!dets.empty())
            scenario.script.frames[i] = std::move(dets);
        prev_rects = rects;
    }
    return scenario;
}

StreamInfo Scenario::stream_info() const {
    StreamInfo info;
    info.width = spec.width;
    info.height = spec.height;
    info.fps = spec.fps;
    info.frame_count = spec.frame_count();
    return info;
}

std::unique_ptr<FrameSource> Scenario::make_stream() const {
    return std::make_unique<ScenarioStream>(spec, stream_info());
}

std::vector<bool> GroundTruthTimeline::object_flags() const {
    std::vector<bool> flags(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i)
        flags[i] = !entries[i].objects.empty();
    return flags;
}

std::vector<bool> GroundTruthTimeline::motion_flags() const {
    std::vector<bool> flags(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i)
        flags[i] = entries[i].motion_expected;
    return flags;
}

std::vector<std::int64_t> timeline_oracle(const std::vector<bool>& motion,
                                          const std::vector<bool>& objects, const Rational& fps,
                                          const Rational& grace, RecordMode mode) {
    if (motion.size() != objects.size())
        throw InvariantError("timeline_oracle: motion/objects length mismatch");

    std::vector<std::int64_t> written;
    if (mode == RecordMode::Continuous) {
        written.resize(motion.size());
        for (std::size_t i = 0; i < motion.size(); ++i)
            written[i] = static_cast<std::int64_t>(i);
        return written;
    }

    bool recording = false;
    Rational last_detection{0, 1};
    for (std::size_t i = 0; i < motion.size(); ++i) {
        const Rational t = frame_timestamp(static_cast<std::int64_t>(i), fps);
        // The detector only runs on motion frames, so the object signal is
        // conjoined with motion; MotionOnly degenerates to the motion flag.
        const bool signal =
            mode == RecordMode::Hybrid ? (motion[i] && objects[i]) : motion[i];

        if (!recording && signal) {
            recording = true;
            last_detection = t;
        }
        if (!recording)
            continue;

        if (t - last_detection < grace) {
            if (signal)
                last_detection = t;
            written.push_back(static_cast<std::int64_t>(i));
        } else if (signal) {
            last_detection = t;
            written.push_back(static_cast<std::int64_t>(i));
        } else {
            recording = false;
        }
    }
    return written;
}

namespace {

ObjectEvent event_from_json(const json& o, const std::string& context) {
    ObjectEvent ev;
    const std::string name = o.at("class").get<std::string>();
    const auto cls = class_from_string(name);
    if (!cls)
        throw InputError(context + ": unknown class '" + name + "'");
    ev.class_id = *cls;
    ev.enter_time = o.at("enter").get<double>();
    ev.exit_time = o.at("exit").get<double>();
    const auto& from = o.at("from");
    const auto& to = o.at("to");
    const auto& size = o.at("size");
    ev.from_x = from.at(0).get<double>();
    ev.from_y = from.at(1).get<double>();
    ev.to_x = to.at(0).get<double>();
    ev.to_y = to.at(1).get<double>();
    ev.width = size.at(0).get<int>();
    ev.height = size.at(1).get<int>();
    ev.intensity = o.value("intensity", 220);
    return ev;
}

Rational fps_from_json(const json& v) {
    if (v.is_string())
        return parse_rational(v.get<std::string>());
    if (v.is_number_integer())
        return Rational(v.get<std::int64_t>(), 1);
    if (v.is_number_float())
        return Rational::from_double(v.get<double>());
    if (v.is_array() && v.size() == 2)
        return Rational(v[0].get<std::int64_t>(), v[1].get<std::int64_t>());
    throw InputError("fps must be a number, \"num/den\" string, or [num, den]");
}

} // namespace

ScenarioSpec load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError(path + ": cannot open scenario spec");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }

    ScenarioSpec spec;
    try {
        spec.duration_seconds = doc.at("duration_seconds").get<double>();
        spec.fps = fps_from_json(doc.at("fps"));
        spec.width = doc.at("width").get<int>();
        spec.height = doc.at("height").get<int>();
        spec.background = doc.value("background", 96);
        spec.seed = doc.value("seed", std::uint64_t{0});
        std::size_t i = 0;
        for (const auto& o : doc.value("objects", json::array()))
            spec.objects.push_back(event_from_json(o, path + ": objects[" + std::to_string(i++) + "]"));
        if (doc.contains("wind")) {
            const auto& w = doc["wind"];
            spec.wind.enabled = w.value("enabled", true);
            spec.wind.intensity = w.value("intensity", 0);
            for (const auto& iv : w.value("intervals", json::array()))
                spec.wind.active_intervals.emplace_back(iv.at(0).get<double>(),
                                                        iv.at(1).get<double>());
        }
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
    try {
        validate_scenario(spec);
    } catch (const ConfigError& e) {
        throw InputError(path + ": " + e.what());
    }
    return spec;
}

void save_scenario(const std::string& path, const ScenarioSpec& spec) {
    ordered_json doc;
    doc["duration_seconds"] = spec.duration_seconds;
    doc["fps"] = spec.fps.str();
    doc["width"] = spec.width;
    doc["height"] = spec.height;
    doc["background"] = spec.background;
    doc["seed"] = spec.seed;
    doc["objects"] = ordered_json::array();
    for (const ObjectEvent& ev : spec.objects) {
        ordered_json o;
        o["class"] = to_string(ev.class_id);
        o["enter"] = ev.enter_time;
        o["exit"] = ev.exit_time;
        o["from"] = {ev.from_x, ev.from_y};
        o["to"] = {ev.to_x, ev.to_y};
        o["size"] = {ev.width, ev.height};
        o["intensity"] = ev.intensity;
        doc["objects"].push_back(o);
    }
    if (spec.wind.enabled) {
        ordered_json w;
        w["enabled"] = true;
        w["intensity"] = spec.wind.intensity;
        w["intervals"] = ordered_json::array();
        for (const auto& [start, end] : spec.wind.active_intervals)
            w["intervals"].push_back({start, end});
        doc["wind"] = w;
    }
    std::ofstream out(path);
    if (!out)
        throw InputError(path + ": cannot open scenario spec for writing");
    out << doc.dump(2) << "\n";
}

void save_ground_truth(const std::string& path, const GroundTruthTimeline& truth) {
    std::ofstream out(path);
    if (!out)
        throw InputError(path + ": cannot open ground truth for writing");
    for (std::size_t i = 0; i < truth.entries.size(); ++i) {
        const GroundTruthEntry& entry = truth.entries[i];
        ordered_json record;
        record["index"] = i;
        record["motion"] = entry.motion_expected;
        record["wind"] = entry.wind_active;
        record["detections"] = ordered_json::array();
        for (const auto& [cls, box] : entry.objects) {
            ordered_json d;
            d["class"] = to_string(cls);
            d["confidence"] = 1.0;
            d["bbox"] = {box.x, box.y, box.w, box.h};
            record["detections"].push_back(d);
        }
        out << record.dump() << "\n";
    }
    if (!out)
        throw InputError(path + ": write failure");
}

} // namespace actigate
