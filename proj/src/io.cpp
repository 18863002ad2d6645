#include "psmkit/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "psmkit/error.hpp"

namespace psmkit::io {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
}

namespace {

json parse_document(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("<document>", e.what());
    }
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) throw ParseError(path + key, "missing");
    return obj.at(key);
}

double number(const json& obj, const std::string& key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_number()) throw ParseError(path + key, "expected a number");
    return v.get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback, const std::string& path) {
    return obj.contains(key) ? number(obj, key, path) : fallback;
}

Eigen::Matrix4d matrix4(const json& m, const std::string& path) {
    if (!m.is_array() || m.size() != 4) throw ParseError(path, "expected a 4x4 row-major array");
    Eigen::Matrix4d out;
    for (std::size_t i = 0; i < 4; ++i) {
        if (!m[i].is_array() || m[i].size() != 4) throw ParseError(path, "expected a 4x4 row-major array");
        for (std::size_t k = 0; k < 4; ++k) {
            if (!m[i][k].is_number()) throw ParseError(path, "expected numbers");
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = m[i][k].get<double>();
        }
    }
    return out;
}

HomogeneousTransform transform(const json& m, const std::string& path) {
    try {
        // Files carry ~16 significant digits; accept rounding at that level.
        return HomogeneousTransform::from_matrix(matrix4(m, path), 1e-8);
    } catch (const ValidationError& e) {
        throw ParseError(path, e.what());
    }
}

json to_json(const Eigen::Matrix4d& m) {
    json out = json::array();
    for (int i = 0; i < 4; ++i) out.push_back({m(i, 0), m(i, 1), m(i, 2), m(i, 3)});
    return out;
}

json to_json(const HomogeneousTransform& t) { return to_json(t.matrix()); }

json camera_json(const PinholeCamera& c) {
    return {{"fx", c.fx}, {"fy", c.fy}, {"cx", c.cx}, {"cy", c.cy}, {"k1", c.distortion.k1},
            {"k2", c.distortion.k2}, {"p1", c.distortion.p1}, {"p2", c.distortion.p2}, {"k3", c.distortion.k3},
            {"width", c.width}, {"height", c.height}};
}

PinholeCamera camera_from(const json& j, const std::string& path) {
    PinholeCamera c;
    c.fx = number(j, "fx", path);
    c.fy = number(j, "fy", path);
    c.cx = number(j, "cx", path);
    c.cy = number(j, "cy", path);
    c.distortion.k1 = number_or(j, "k1", 0.0, path);
    c.distortion.k2 = number_or(j, "k2", 0.0, path);
    c.distortion.p1 = number_or(j, "p1", 0.0, path);
    c.distortion.p2 = number_or(j, "p2", 0.0, path);
    c.distortion.k3 = number_or(j, "k3", 0.0, path);
    const json& w = require(j, "width", path);
    const json& h = require(j, "height", path);
    if (!w.is_number_integer() || !h.is_number_integer()) throw ParseError(path + "width", "expected integers");
    c.width = w.get<int>();
    c.height = h.get<int>();
    try {
        c.validate();
    } catch (const ValidationError& e) {
        throw ParseError(path.empty() ? "camera" : path, e.what());
    }
    return c;
}

}  // namespace

CalibrationFile parse_calibration(std::string_view json_text) {
    const json doc = parse_document(json_text);
    const json& acts = require(doc, "actuators", "");
    if (!acts.is_array() || acts.empty()) throw ParseError("actuators", "expected a non-empty array");

    CalibrationFile out;
    for (std::size_t i = 0; i < acts.size(); ++i) {
        const std::string path = "actuators[" + std::to_string(i) + "].";
        const json& a = acts[i];
        ActuatorSensorModel m;
        m.pot.k_P = number(a, "k_P", path);
        m.pot.b_P = number(a, "b_P", path);
        m.enc.k_E = number(a, "k_E", path);
        m.enc.b_E = number(a, "b_E", path);
        m.pot.noise_std = number_or(a, "noise_std", 0.0, path);
        if (a.contains("adc_bits")) {
            if (!a["adc_bits"].is_number_integer()) throw ParseError(path + "adc_bits", "expected an integer");
            m.pot.adc_bits = a["adc_bits"].get<int>();
        }
        if (a.contains("adc_range")) {
            const json& r = a["adc_range"];
            if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
                throw ParseError(path + "adc_range", "expected [min, max]");
            m.pot.adc_range = {r[0].get<double>(), r[1].get<double>()};
        }
        if (a.contains("nonlinearity_knots") && !a["nonlinearity_knots"].empty()) {
            const json& k = a["nonlinearity_knots"];
            if (!k.is_array()) throw ParseError(path + "nonlinearity_knots", "expected an array of [in, out]");
            std::vector<std::pair<double, double>> knots;
            for (const auto& kv : k) {
                if (!kv.is_array() || kv.size() != 2 || !kv[0].is_number() || !kv[1].is_number())
                    throw ParseError(path + "nonlinearity_knots", "expected [in, out] pairs");
                knots.emplace_back(kv[0].get<double>(), kv[1].get<double>());
            }
            const std::string mode = a.value("interpolation", std::string("linear"));
            if (mode != "linear" && mode != "spline") throw ParseError(path + "interpolation", "expected linear or spline");
            try {
                m.pot.nonlinearity.emplace(std::move(knots),
                                           mode == "spline" ? Interpolation::CubicSpline : Interpolation::Linear);
            } catch (const ValidationError& e) {
                throw ParseError(path + "nonlinearity_knots", e.what());
            }
        }
        try {
            m.pot.validate();
            m.enc.validate();
        } catch (const ValidationError& e) {
            throw ParseError(path.substr(0, path.size() - 1), e.what());
        }
        out.actuators.push_back(std::move(m));
    }

    const auto n = static_cast<Eigen::Index>(out.actuators.size());
    Eigen::MatrixXd c = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd g = Eigen::VectorXd::Ones(n);
    if (doc.contains("coupling_matrix")) {
        const json& cm = doc["coupling_matrix"];
        if (!cm.is_array() || static_cast<Eigen::Index>(cm.size()) != n)
            throw ParseError("coupling_matrix", "expected " + std::to_string(n) + " rows");
        for (Eigen::Index r = 0; r < n; ++r) {
            const json& row = cm[static_cast<std::size_t>(r)];
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
                throw ParseError("coupling_matrix", "expected " + std::to_string(n) + " columns");
            for (Eigen::Index k = 0; k < n; ++k) {
                if (!row[static_cast<std::size_t>(k)].is_number()) throw ParseError("coupling_matrix", "expected numbers");
                c(r, k) = row[static_cast<std::size_t>(k)].get<double>();
            }
        }
    }
    if (doc.contains("gear_ratios")) {
        const json& gr = doc["gear_ratios"];
        if (!gr.is_array() || static_cast<Eigen::Index>(gr.size()) != n)
            throw ParseError("gear_ratios", "expected " + std::to_string(n) + " entries");
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!gr[static_cast<std::size_t>(i)].is_number()) throw ParseError("gear_ratios", "expected numbers");
            g[i] = gr[static_cast<std::size_t>(i)].get<double>();
        }
    }
    try {
        out.coupling = CouplingModel(c, g);
    } catch (const ValidationError& e) {
        throw ParseError("coupling_matrix", e.what());
    }
    return out;
}

std::string calibration_to_json(const CalibrationFile& file) {
    json doc;
    doc["actuators"] = json::array();
    for (const auto& m : file.actuators) {
        json a = {{"k_P", m.pot.k_P},
                  {"b_P", m.pot.b_P},
                  {"k_E", m.enc.k_E},
                  {"b_E", m.enc.b_E},
                  {"noise_std", m.pot.noise_std},
                  {"adc_bits", m.pot.adc_bits},
                  {"adc_range", {m.pot.adc_range.min, m.pot.adc_range.max}}};
        a["nonlinearity_knots"] = json::array();
        if (m.pot.nonlinearity) {
            for (const auto& [in, out] : m.pot.nonlinearity->knots()) a["nonlinearity_knots"].push_back({in, out});
            a["interpolation"] =
                m.pot.nonlinearity->interpolation() == Interpolation::CubicSpline ? "spline" : "linear";
        }
        doc["actuators"].push_back(a);
    }
    const auto& c = file.coupling.coupling_matrix();
    doc["coupling_matrix"] = json::array();
    for (Eigen::Index r = 0; r < c.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index k = 0; k < c.cols(); ++k) row.push_back(c(r, k));
        doc["coupling_matrix"].push_back(row);
    }
    doc["gear_ratios"] = std::vector<double>(file.coupling.gear_ratios().begin(), file.coupling.gear_ratios().end());
    return doc.dump(2);
}

PinholeCamera parse_camera(std::string_view json_text) { return camera_from(parse_document(json_text), ""); }

std::string camera_to_json(const PinholeCamera& camera) { return camera_json(camera).dump(2); }

StereoRig parse_stereo_rig(std::string_view json_text) {
    const json doc = parse_document(json_text);
    StereoRig rig;
    rig.left = camera_from(require(doc, "left", ""), "left.");
    rig.right = camera_from(require(doc, "right", ""), "right.");
    rig.left_to_right = transform(require(doc, "left_to_right", ""), "left_to_right");
    return rig;
}

std::string stereo_rig_to_json(const StereoRig& rig) {
    json doc = {{"left", camera_json(rig.left)}, {"right", camera_json(rig.right)}};
    doc["left_to_right"] = to_json(rig.left_to_right);
    return doc.dump(2);
}

std::vector<MotionPair> parse_motion_pairs(std::string_view json_text) {
    const json doc = parse_document(json_text);
    const json& list = doc.is_array() ? doc : require(doc, "pairs", "");
    if (!list.is_array()) throw ParseError("pairs", "expected an array");
    std::vector<MotionPair> out;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string path = "pairs[" + std::to_string(i) + "].";
        out.push_back({transform(require(list[i], "A", path), path + "A"),
                       transform(require(list[i], "B", path), path + "B")});
    }
    return out;
}

std::string motion_pairs_to_json(const std::vector<MotionPair>& pairs, std::uint64_t seed) {
    json doc;
    doc["metadata"] = {{"seed", seed}, {"count", pairs.size()}};
    doc["pairs"] = json::array();
    for (const auto& p : pairs) doc["pairs"].push_back({{"A", to_json(p.A)}, {"B", to_json(p.B)}});
    return doc.dump(2);
}

HomogeneousTransform parse_transform(std::string_view json_text) {
    const json doc = parse_document(json_text);
    return transform(doc.is_object() ? require(doc, "X", "") : doc, "X");
}

std::string transform_to_json(const HomogeneousTransform& t) { return to_json(t).dump(2); }

std::string constancy_report_to_json(const ConstancyReport& report, const KinematicChain& chain,
                                     const OffsetErrorVector& delta, std::span<const JointVector> samples, int depth) {
    json doc = {{"is_constant", report.is_constant},
                {"spread", report.spread},
                {"samples", report.samples},
                {"tolerance", report.tolerance},
                {"depth", depth},
                {"chain", chain.name()}};
    doc["delta"] = std::vector<double>(delta.begin(), delta.end());
    doc["transforms"] = json::array();
    for (const auto& q : samples) {
        json entry;
        entry["q"] = std::vector<double>(q.begin(), q.end());
        entry["realignment"] = to_json(realignment_transform(chain, delta, q, depth));
        doc["transforms"].push_back(entry);
    }
    // Closed forms are available for the isolated-error cases.
    const auto nonzero = [&](Eigen::Index i) { return i < delta.size() && delta[i] != 0.0; };
    const int count = static_cast<int>(nonzero(0)) + static_cast<int>(nonzero(1)) + static_cast<int>(nonzero(2));
    if (count == 1) {
        double worst = 0.0;
        for (const auto& q : samples) {
            HomogeneousTransform closed;
            if (nonzero(0))
                closed = delta1_closed_form(delta[0]);
            else if (nonzero(1))
                closed = delta2_closed_form(delta[1], q[0]);
            else
                closed = delta3_closed_form(delta[2], q[0], q[1]);
            worst = std::max(worst, frobenius_distance(closed, realignment_transform(chain, delta, q, depth)));
        }
        doc["closed_form_max_deviation"] = worst;
    }
    return doc.dump(2);
}

std::string verification_report_to_json(const VerificationReport& report) {
    json doc = {{"pass", report.pass}, {"threshold", report.threshold}};
    doc["max_discrepancy"] = report.max_discrepancy;
    doc["actuator_pass"] = report.actuator_pass;
    return doc.dump(2);
}

std::string handeye_result_to_json(const HandEyeResult& result) {
    json doc = {{"rotation_residual", result.rotation_residual},
                {"translation_residual", result.translation_residual}};
    doc["X"] = to_json(result.X);
    return doc.dump(2);
}

std::string bp3_result_to_json(const Bp3SearchResult& result, double true_error) {
    return json{{"estimated_b_P3", result.estimated_b_P3},
                {"residual_motion", result.residual_motion},
                {"insertion_tested", result.insertion_tested},
                {"true_b_P3_error", true_error}}
        .dump(2);
}

std::string rmse_results_to_json(const std::vector<RmseResult>& results, std::string_view chain_name) {
    json doc;
    doc["chain"] = std::string(chain_name);
    doc["results"] = json::array();
    for (const auto& r : results) doc["results"].push_back({{"e2_deg", r.e2}, {"rmse_mm", r.rmse}});
    return doc.dump(2);
}

std::string rmse_results_to_csv(const std::vector<RmseResult>& results) {
    std::string out = "e2_deg,rmse_mm\n";
    for (const auto& r : results) out += format_double(r.e2) + "," + format_double(r.rmse) + "\n";
    return out;
}

namespace {

bool parse_double(std::string_view s, double& out) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

std::vector<std::vector<double>> parse_numeric_csv(std::string_view text) {
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
        std::vector<double> row;
        bool numeric = true;
        for (auto field : split(line, ',')) {
            double v = 0.0;
            if (!parse_double(field, v)) {
                numeric = false;
                break;
            }
            row.push_back(v);
        }
        if (!numeric) {
            if (rows.empty() && line_no == 1) continue;  // header
            throw ParseError("csv line " + std::to_string(line_no), "non-numeric field");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<double> parse_number_list(std::string_view text) {
    std::vector<double> out;
    for (auto field : split(text, ',')) {
        double v = 0.0;
        if (!parse_double(field, v)) throw ParseError("list", "'" + std::string(field) + "' is not a number");
        out.push_back(v);
    }
    return out;
}

}  // namespace psmkit::io
