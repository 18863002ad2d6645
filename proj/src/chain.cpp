#include "psmkit/chain.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "psmkit/bundled_psm.hpp"
#include "psmkit/error.hpp"

namespace psmkit {

using nlohmann::json;

HomogeneousTransform dh_transform(const DhRow& row, double q) {
    const bool has_joint = row.joint.has_value();
    const double theta = row.theta_offset + (has_joint && row.kind == JointKind::Revolute ? q : 0.0);
    const double d = row.d + (has_joint && row.kind == JointKind::Prismatic ? q : 0.0);
    const double ct = std::cos(theta), st = std::sin(theta);
    const double ca = std::cos(row.alpha_prev), sa = std::sin(row.alpha_prev);

    Eigen::Matrix3d r;
    r << ct, -st, 0.0,
         st * ca, ct * ca, -sa,
         st * sa, ct * sa, ca;
    return {r, Eigen::Vector3d(row.a_prev, -d * sa, d * ca)};
}

KinematicChain::KinematicChain(std::string name, std::vector<DhRow> rows, std::vector<JointLimit> limits,
                               std::map<std::string, double> tool_constants, HomogeneousTransform tip_offset)
    : name_(std::move(name)),
      rows_(std::move(rows)),
      tool_constants_(std::move(tool_constants)),
      tip_offset_(tip_offset) {
    if (rows_.empty()) throw ValidationError("chain has no rows");

    std::vector<std::optional<std::size_t>> owner;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        const auto& row = rows_[r];
        if (!std::isfinite(row.alpha_prev) || !std::isfinite(row.a_prev) || !std::isfinite(row.d) ||
            !std::isfinite(row.theta_offset))
            throw ValidationError("row " + std::to_string(r) + " has non-finite parameters");
        if (!row.joint) continue;
        const std::size_t j = *row.joint;
        if (j >= owner.size()) owner.resize(j + 1);
        if (owner[j]) throw ValidationError("joint index " + std::to_string(j) + " used by more than one row");
        owner[j] = r;
    }
    for (std::size_t j = 0; j < owner.size(); ++j)
        if (!owner[j]) throw ValidationError("joint indices are not contiguous: missing " + std::to_string(j));
    if (owner.empty()) throw ValidationError("chain has no joints");

    joint_count_ = owner.size();
    for (std::size_t j = 0; j < joint_count_; ++j) {
        row_of_joint_.push_back(*owner[j]);
        joint_kinds_.push_back(rows_[*owner[j]].kind);
    }

    if (limits.empty()) {
        for (JointKind k : joint_kinds_)
            limits.push_back(k == JointKind::Revolute ? JointLimit{-std::numbers::pi, std::numbers::pi}
                                                      : JointLimit{0.0, 0.24});
    }
    if (limits.size() != joint_count_)
        throw ValidationError("expected " + std::to_string(joint_count_) + " joint limits, got " +
                              std::to_string(limits.size()));
    for (std::size_t j = 0; j < limits.size(); ++j)
        if (!(limits[j].min <= limits[j].max))
            throw ValidationError("joint " + std::to_string(j) + " limit min exceeds max");
    limits_ = std::move(limits);

    if (!tip_offset_.is_rigid()) throw ValidationError("tip offset is not a rigid transform");
}

double KinematicChain::tool_constant(const std::string& key) const {
    auto it = tool_constants_.find(key);
    if (it == tool_constants_.end()) throw ConfigurationError("chain '" + name_ + "' has no tool constant " + key);
    return it->second;
}

void KinematicChain::check_limits(const JointVector& q) const {
    if (static_cast<std::size_t>(q.size()) != joint_count_)
        throw PreconditionError("joint vector has " + std::to_string(q.size()) + " entries, chain has " +
                                std::to_string(joint_count_) + " joints");
    for (std::size_t j = 0; j < joint_count_; ++j) {
        if (!std::isfinite(q[j])) throw PreconditionError("joint " + std::to_string(j) + " is not finite");
        if (!limits_[j].contains(q[j])) throw JointLimitError(j, q[j], limits_[j].min, limits_[j].max);
    }
}

namespace {

double joint_value(const DhRow& row, const JointVector& q) { return row.joint ? q[*row.joint] : 0.0; }

}  // namespace

HomogeneousTransform partial_product(const KinematicChain& chain, const JointVector& q, std::size_t row_end) {
    HomogeneousTransform t;
    const auto& rows = chain.rows();
    for (std::size_t r = 0; r < row_end && r < rows.size(); ++r) t = t * dh_transform(rows[r], joint_value(rows[r], q));
    return t;
}

FkResult forward_kinematics(const KinematicChain& chain, const JointVector& q) {
    chain.check_limits(q);
    FkResult out;
    out.frames.reserve(chain.rows().size());
    HomogeneousTransform t;
    for (const auto& row : chain.rows()) {
        t = t * dh_transform(row, joint_value(row, q));
        out.frames.push_back(t);
    }
    out.tip = t * chain.tip_offset();
    return out;
}

HomogeneousTransform tip_pose(const KinematicChain& chain, const JointVector& q) {
    chain.check_limits(q);
    return partial_product(chain, q, chain.rows().size()) * chain.tip_offset();
}

namespace {

double number_field(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) throw ParseError(path + "." + key, "missing");
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ParseError(path + "." + key, "expected a number");
    return v.get<double>();
}

HomogeneousTransform parse_matrix4(const json& m, const std::string& path) {
    if (!m.is_array() || m.size() != 4) throw ParseError(path, "expected a 4x4 row-major array");
    Eigen::Matrix4d out;
    for (int i = 0; i < 4; ++i) {
        if (!m[i].is_array() || m[i].size() != 4) throw ParseError(path, "expected a 4x4 row-major array");
        for (int k = 0; k < 4; ++k) {
            if (!m[i][k].is_number()) throw ParseError(path, "expected numbers");
            out(i, k) = m[i][k].get<double>();
        }
    }
    try {
        return HomogeneousTransform::from_matrix(out);
    } catch (const ValidationError& e) {
        throw ParseError(path, e.what());
    }
}

}  // namespace

KinematicChain load_chain(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError("<document>", e.what());
    }
    if (!doc.is_object()) throw ParseError("<document>", "expected an object");

    std::string name = doc.value("name", std::string("unnamed"));
    if (!doc.contains("rows") || !doc["rows"].is_array()) throw ParseError("rows", "missing or not an array");

    std::vector<DhRow> rows;
    for (std::size_t i = 0; i < doc["rows"].size(); ++i) {
        const json& r = doc["rows"][i];
        const std::string path = "rows[" + std::to_string(i) + "]";
        if (!r.is_object()) throw ParseError(path, "expected an object");
        DhRow row;
        row.alpha_prev = number_field(r, "alpha_prev", path);
        row.a_prev = number_field(r, "a_prev", path);
        row.d = number_field(r, "d", path);
        row.theta_offset = number_field(r, "theta_offset", path);
        const std::string kind = r.value("kind", std::string("revolute"));
        if (kind == "revolute")
            row.kind = JointKind::Revolute;
        else if (kind == "prismatic")
            row.kind = JointKind::Prismatic;
        else if (kind == "fixed")
            row.kind = JointKind::Revolute;
        else
            throw ParseError(path + ".kind", "unknown joint kind '" + kind + "'");
        if (r.contains("joint") && !r["joint"].is_null() && kind != "fixed") {
            if (!r["joint"].is_number_integer() || r["joint"].get<long long>() < 0)
                throw ParseError(path + ".joint", "expected a non-negative integer");
            row.joint = r["joint"].get<std::size_t>();
        }
        rows.push_back(row);
    }

    std::vector<JointLimit> limits;
    if (doc.contains("limits")) {
        const json& l = doc["limits"];
        if (!l.is_array()) throw ParseError("limits", "expected an array of [min, max]");
        for (std::size_t i = 0; i < l.size(); ++i) {
            const std::string path = "limits[" + std::to_string(i) + "]";
            if (!l[i].is_array() || l[i].size() != 2 || !l[i][0].is_number() || !l[i][1].is_number())
                throw ParseError(path, "expected [min, max]");
            limits.push_back({l[i][0].get<double>(), l[i][1].get<double>()});
        }
    }

    std::map<std::string, double> constants;
    if (doc.contains("tool_constants")) {
        const json& c = doc["tool_constants"];
        if (!c.is_object()) throw ParseError("tool_constants", "expected an object");
        for (const auto& [k, v] : c.items()) {
            if (!v.is_number()) throw ParseError("tool_constants." + k, "expected a number");
            constants[k] = v.get<double>();
        }
    }

    HomogeneousTransform tip;
    if (doc.contains("tip_offset")) tip = parse_matrix4(doc["tip_offset"], "tip_offset");

    return KinematicChain(std::move(name), std::move(rows), std::move(limits), std::move(constants), tip);
}

KinematicChain load_chain_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open robot description '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_chain(ss.str());
}

std::string_view bundled_psm_description() { return detail::kBundledPsmJson; }

KinematicChain bundled_psm_chain() { return load_chain(bundled_psm_description()); }

std::string chain_to_json(const KinematicChain& chain) {
    json doc;
    doc["name"] = chain.name();
    doc["rows"] = json::array();
    for (const auto& r : chain.rows()) {
        json row = {{"alpha_prev", r.alpha_prev}, {"a_prev", r.a_prev}, {"d", r.d}, {"theta_offset", r.theta_offset}};
        row["kind"] = !r.joint ? "fixed" : (r.kind == JointKind::Prismatic ? "prismatic" : "revolute");
        row["joint"] = r.joint ? json(*r.joint) : json(nullptr);
        doc["rows"].push_back(row);
    }
    doc["limits"] = json::array();
    for (const auto& l : chain.limits()) doc["limits"].push_back({l.min, l.max});
    doc["tool_constants"] = chain.tool_constants();
    const Eigen::Matrix4d m = chain.tip_offset().matrix();
    json tip = json::array();
    for (int i = 0; i < 4; ++i) tip.push_back({m(i, 0), m(i, 1), m(i, 2), m(i, 3)});
    doc["tip_offset"] = tip;
    return doc.dump(2);
}

}  // namespace psmkit
