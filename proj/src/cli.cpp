#include "combing/cli.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "combing/linkdeg.hpp"

namespace combing {

void apply_config_json(RunConfig& cfg, const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "x")
                cfg.x = value.get<std::string>();
            else if (key == "y")
                cfg.y = value.get<std::string>();
            else if (key == "resolution")
                cfg.extraction.resolution = value.get<int>();
            else if (key == "eps")
                cfg.extraction.epsilon = value.get<double>();
            else if (key == "step")
                cfg.extraction.step = value.get<double>();
            else if (key == "perturb")
                cfg.perturb = value.get<double>();
            else if (key == "seed")
                cfg.seed = value.get<std::uint64_t>();
            else if (key == "out")
                cfg.out = value.get<std::string>();
            else if (key == "obj")
                cfg.obj = value.get<std::string>();
            else if (key == "suite")
                cfg.suite = value.get<std::string>();
            else
                throw std::invalid_argument("unknown config key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad config value: ") + e.what());
    }
}

nlohmann::json orientation_conventions() {
    return {{"quaternion", "q = x1 + x2 i + x3 j + x4 k = z1 + z2 j, z1 = x1 + i x2, z2 = x3 + i x4"},
            {"s3", "outward normal followed by a positive tangent frame is positive in R^4"},
            {"right_frame", "(i q, j q, k q) is a positive tangent frame at q"},
            {"sign_class", "positive: X = c Y with c > 0; negative: c < 0"},
            {"loop", "tangent g1 x g2 of the two constraint gradients in right coordinates, reversed on negative loops"}};
}

nlohmann::json curves_to_json(const std::string& x, const std::string& y, const CollinearityLinks& links) {
    nlohmann::json loops = nlohmann::json::array();
    for (const LinkSet* set : {&links.positive, &links.negative})
        for (const auto& l : set->loops) {
            nlohmann::json pts = nlohmann::json::array();
            for (const auto& p : l.points) {
                const Vec4 v = p.vec();
                pts.push_back({v[0], v[1], v[2], v[3]});
            }
            loops.push_back({{"sign_class", to_string(set->sign_class)}, {"points", std::move(pts)}});
        }
    return {{"schema", kSchemaVersion},
            {"fields", {x, y}},
            {"orientation_conventions", orientation_conventions()},
            {"loops", std::move(loops)}};
}

std::vector<TaggedLoop> curves_from_json(const nlohmann::json& j) {
    std::vector<TaggedLoop> out;
    try {
        if (j.at("schema").get<int>() != kSchemaVersion) throw std::invalid_argument("unsupported curve schema");
        for (const auto& l : j.at("loops")) {
            TaggedLoop t;
            const std::string s = l.at("sign_class").get<std::string>();
            if (s == "positive")
                t.sign_class = SignClass::Positive;
            else if (s == "negative")
                t.sign_class = SignClass::Negative;
            else
                throw std::invalid_argument("bad sign_class '" + s + "'");
            for (const auto& p : l.at("points")) {
                const auto v = p.get<std::vector<double>>();
                if (v.size() != 4) throw std::invalid_argument("curve points need 4 coordinates");
                t.loop.points.push_back(S3Point(Vec4{v[0], v[1], v[2], v[3]}));
            }
            out.push_back(std::move(t));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed curve file: ") + e.what());
    }
    return out;
}

void write_obj(std::ostream& os, const std::vector<TaggedLoop>& loops) {
    os << "# stereographic images of collinearity loops\n";
    if (loops.empty()) return;
    std::vector<const OrientedLoop*> ptrs;
    for (const auto& t : loops) ptrs.push_back(&t.loop);
    const Chart chart(S3Point(-projection_pole(ptrs).q()));
    std::ostringstream buf;
    buf.precision(17);
    std::size_t base = 1;
    for (const auto& t : loops) {
        buf << "o " << to_string(t.sign_class) << "\n";
        for (const auto& p : t.loop.points) {
            const Vec3 y = chart.project(p);
            buf << "v " << y[0] << ' ' << y[1] << ' ' << y[2] << "\n";
        }
        buf << 'l';
        for (std::size_t k = 0; k < t.loop.size(); ++k) buf << ' ' << base + k;
        buf << ' ' << base << "\n";
        base += t.loop.size();
    }
    os << buf.str();
}

std::vector<std::vector<Vec3>> read_obj(std::istream& is) {
    std::vector<Vec3> vertices;
    std::vector<std::vector<Vec3>> lines;
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            Vec3 v{};
            if (!(ls >> v[0] >> v[1] >> v[2])) throw std::invalid_argument("bad OBJ vertex: " + line);
            vertices.push_back(v);
        } else if (tag == "l") {
            std::vector<std::size_t> idx;
            std::size_t k;
            while (ls >> k) {
                if (k == 0 || k > vertices.size()) throw std::invalid_argument("OBJ index out of range: " + line);
                idx.push_back(k);
            }
            if (idx.size() > 1 && idx.front() == idx.back()) idx.pop_back();
            std::vector<Vec3> poly;
            for (std::size_t i : idx) poly.push_back(vertices[i - 1]);
            lines.push_back(std::move(poly));
        }
    }
    return lines;
}

}  // namespace combing
