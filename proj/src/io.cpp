#include "lpstab/io.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include <fmt/format.h>

namespace lpstab::io {

namespace {

const json& field(const json& j, const std::string& path, const char* name) {
    if (!j.is_object()) throw InputError(path, "expected an object");
    const auto it = j.find(name);
    if (it == j.end()) throw InputError(path + "." + name, "missing field");
    return *it;
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw InputError(path, "expected a number");
    return j.get<double>();
}

std::vector<double> number_array(const json& j, const std::string& path) {
    if (!j.is_array()) throw InputError(path, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

planar::Vec2 point(const json& j, const std::string& path) {
    const auto xy = number_array(j, path);
    if (xy.size() != 2) throw InputError(path, "expected [x, y]");
    return {xy[0], xy[1]};
}

json point_json(planar::Vec2 v) { return json::array({v.x, v.y}); }

std::string with_file(const std::filesystem::path& file, const std::string& where) {
    return file.string() + ":" + where;
}

} // namespace

planar::SupportOracle body_from_json(const json& j, const std::string& path) {
    using planar::SupportOracle;
    const auto& type_field = field(j, path, "type");
    if (!type_field.is_string()) throw InputError(path + ".type", "expected a string");
    const auto type = type_field.get<std::string>();
    try {
        if (type == "polygon") {
            const auto& verts = field(j, path, "vertices");
            if (!verts.is_array()) throw InputError(path + ".vertices", "expected an array of points");
            std::vector<planar::Vec2> pts;
            for (std::size_t i = 0; i < verts.size(); ++i)
                pts.push_back(point(verts[i], path + ".vertices[" + std::to_string(i) + "]"));
            return SupportOracle::polygon(planar::Polygon::from_vertices(pts));
        }
        if (type == "ball") {
            return SupportOracle::ball(point(field(j, path, "center"), path + ".center"),
                                       number(field(j, path, "radius"), path + ".radius"));
        }
        if (type == "dilate") {
            return SupportOracle::dilate(number(field(j, path, "lambda"), path + ".lambda"),
                                         body_from_json(field(j, path, "body"), path + ".body"));
        }
        if (type == "lp_sum") {
            return SupportOracle::lp_sum(number(field(j, path, "p"), path + ".p"),
                                         body_from_json(field(j, path, "left"), path + ".left"),
                                         body_from_json(field(j, path, "right"), path + ".right"));
        }
    } catch (const planar::GeometryError& e) {
        throw InputError(path, e.what());
    }
    throw InputError(path + ".type", "unknown body type '" + type + "'");
}

json body_to_json(const planar::SupportOracle& body) {
    using Kind = planar::SupportOracle::Kind;
    switch (body.kind()) {
    case Kind::Polygon: {
        json verts = json::array();
        for (const auto& v : body.as_polygon().vertices()) verts.push_back(point_json(v));
        return {{"type", "polygon"}, {"vertices", verts}};
    }
    case Kind::Ball:
        return {{"type", "ball"}, {"center", point_json(body.as_ball().center)}, {"radius", body.as_ball().radius}};
    case Kind::Dilate:
        return {{"type", "dilate"}, {"lambda", body.as_dilate().factor}, {"body", body_to_json(body.as_dilate().inner)}};
    case Kind::LpSum:
        return {{"type", "lp_sum"},
                {"p", body.as_lp_sum().p},
                {"left", body_to_json(body.as_lp_sum().left)},
                {"right", body_to_json(body.as_lp_sum().right)}};
    }
    return {};
}

jensen::DiscreteDistribution distribution_from_json(const json& j, const std::string& path) {
    auto weights = number_array(field(j, path, "weights"), path + ".weights");
    auto values = number_array(field(j, path, "values"), path + ".values");
    try {
        return {std::move(weights), std::move(values)};
    } catch (const jensen::InvalidDistribution& e) {
        throw InputError(path, e.what());
    }
}

json distribution_to_json(const jensen::DiscreteDistribution& d) {
    return {{"weights", d.weights()}, {"values", d.values()}};
}

json read_json_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw InputError(file.string(), "cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(file.string(), std::string("malformed JSON: ") + e.what());
    }
}

planar::SupportOracle load_body(const std::filesystem::path& file) {
    const auto j = read_json_file(file);
    try {
        return body_from_json(j);
    } catch (const InputError& e) {
        throw InputError(with_file(file, e.where()), std::string(e.what()).substr(e.where().size() + 2));
    }
}

jensen::DiscreteDistribution load_distribution(const std::filesystem::path& file) {
    const auto j = read_json_file(file);
    try {
        return distribution_from_json(j);
    } catch (const InputError& e) {
        throw InputError(with_file(file, e.where()), std::string(e.what()).substr(e.where().size() + 2));
    }
}

json to_json(const jensen::JensenReport& r) {
    return {{"p", r.p}, {"deficit", r.deficit}, {"deviation", r.deviation}, {"c_p", r.c_p}, {"margin", r.margin}};
}

json to_json(const jensen::PsiGridMinimum& r) {
    return {{"min", r.value}, {"a", r.a}, {"t", r.t}, {"t_step", r.t_step}};
}

json to_json(const mixed::StabilityReport& r) {
    return {{"p", r.p},
            {"n", r.n},
            {"lhs", r.lhs},
            {"rhs", r.rhs},
            {"margin", r.margin},
            {"asymmetry", r.asymmetry},
            {"sigma", r.sigma},
            {"discretization", r.discretization},
            {"numerical_error", r.numerical_error}};
}

json to_json(const mixed::ProofChainReport& r) {
    json steps = json::array();
    for (const auto& s : r.steps) {
        steps.push_back({{"name", s.name}, {"lhs", s.lhs}, {"rhs", s.rhs}, {"margin", s.margin}, {"identity", s.identity}});
    }
    return {{"p", r.p},
            {"delta_p", r.delta_p},
            {"v1", r.v1},
            {"gamma", r.gamma},
            {"gamma_p", r.gamma_p},
            {"support_gap", r.support_gap},
            {"v1_hull", r.v1_hull},
            {"v1_min", r.v1_min},
            {"v1_intersection", r.v1_intersection},
            {"volume_hull", r.volume_hull},
            {"volume_intersection", r.volume_intersection},
            {"asymmetry", r.asymmetry},
            {"intersection_reading", "V_1(K, K_2) taken with the pointwise min of support functions"},
            {"min_margin", r.min_margin()},
            {"steps", steps}};
}

json to_json(const sharpness::EpsilonScan& scan) {
    json out = {{"n", scan.n},
                {"p", scan.p},
                {"directions", scan.directions},
                {"rows", scan.rows.size()},
                {"delta_slope", scan.delta_slope},
                {"asymmetry_sq_slope", scan.asymmetry_sq_slope},
                {"delta_over_eps_sq", scan.delta_over_eps_sq},
                {"asymmetry_over_eps", scan.asymmetry_over_eps},
                {"delta_over_asymmetry_sq", scan.delta_over_asymmetry_sq},
                {"sharp", scan.sharp}};
    out["beta_slope"] = scan.beta_slope ? json(*scan.beta_slope) : json(nullptr);
    return out;
}

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

std::string csv_row(std::uint64_t seed, const mixed::StabilityReport& r) {
    return fmt::format("{},{},{},{},{},{},{},{}", seed, format_double(r.p), format_double(r.lhs),
                       format_double(r.rhs), format_double(r.margin), format_double(r.asymmetry),
                       format_double(r.sigma), r.discretization);
}

std::string scan_csv(const sharpness::EpsilonScan& scan) {
    std::string out(kScanCsvHeader);
    out += '\n';
    for (const auto& row : scan.rows) {
        out += fmt::format("{},{},{},{},{},{},{}\n", scan.n, format_double(scan.p), format_double(row.eps),
                           format_double(row.delta_p), format_double(row.asymmetry),
                           format_double(row.asymmetry_sq), row.beta_p ? format_double(*row.beta_p) : "");
    }
    return out;
}

void write_atomically(const std::filesystem::path& file, std::string_view content) {
    auto tmp = file;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, file, ec);
    if (ec) throw std::runtime_error("cannot rename " + tmp.string() + " to " + file.string() + ": " + ec.message());
}

} // namespace lpstab::io
