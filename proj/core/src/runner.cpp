#include "latembed/runner.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <utility>

#include "json.hpp"

namespace latembed {

namespace {

using Json = nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

struct Ctx {
    std::vector<std::string>& diags;
    void add(const std::string& path, const std::string& message) {
        diags.push_back(path + ": " + message);
    }
};

void check_keys(const Json& obj, const std::string& path,
                std::initializer_list<const char*> allowed, Ctx& ctx) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known) ctx.add(path + "." + item.key(), "unknown key");
    }
}

const Json* field(const Json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

std::optional<double> get_number(const Json& obj, const std::string& path, const char* key,
                                 Ctx& ctx) {
    const Json* j = field(obj, key);
    if (!j) return std::nullopt;
    if (!j->is_number()) {
        ctx.add(path + "." + key, "must be a number");
        return std::nullopt;
    }
    return j->get<double>();
}

std::optional<std::int64_t> get_integer(const Json& obj, const std::string& path,
                                        const char* key, Ctx& ctx) {
    const Json* j = field(obj, key);
    if (!j) return std::nullopt;
    if (!j->is_number_integer()) {
        ctx.add(path + "." + key, "must be an integer");
        return std::nullopt;
    }
    return j->get<std::int64_t>();
}

std::optional<std::string> get_string(const Json& obj, const std::string& path, const char* key,
                                      Ctx& ctx) {
    const Json* j = field(obj, key);
    if (!j) return std::nullopt;
    if (!j->is_string()) {
        ctx.add(path + "." + key, "must be a string");
        return std::nullopt;
    }
    return j->get<std::string>();
}

std::optional<Eigen::VectorXd> parse_real_vector(const Json& j, const std::string& path,
                                                 Ctx& ctx) {
    if (!j.is_array() || j.empty()) {
        ctx.add(path, "must be a nonempty array of numbers");
        return std::nullopt;
    }
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) {
            ctx.add(path + "[" + std::to_string(i) + "]", "must be a number");
            return std::nullopt;
        }
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

std::optional<std::vector<std::int64_t>> parse_int_vector(const Json& j,
                                                          const std::string& path, Ctx& ctx) {
    if (!j.is_array() || j.empty()) {
        ctx.add(path, "must be a nonempty array of integers");
        return std::nullopt;
    }
    std::vector<std::int64_t> v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number_integer()) {
            ctx.add(path + "[" + std::to_string(i) + "]", "must be an integer");
            return std::nullopt;
        }
        v[i] = j[i].get<std::int64_t>();
    }
    return v;
}

constexpr std::size_t kMaxLatticePoints = 1000000;

std::optional<Lattice> parse_lattice(const Json& j, Ctx& ctx) {
    const std::string path = "lattice";
    if (!j.is_object()) {
        ctx.add(path, "must be an object");
        return std::nullopt;
    }
    check_keys(j, path, {"box", "points"}, ctx);
    const Json* box = field(j, "box");
    const Json* points = field(j, "points");
    if (!!box == !!points) {
        ctx.add(path, "exactly one of \"box\" or \"points\" is required");
        return std::nullopt;
    }

    if (box) {
        if (!box->is_object()) {
            ctx.add(path + ".box", "must be an object");
            return std::nullopt;
        }
        check_keys(*box, path + ".box", {"lower", "upper"}, ctx);
        const Json* lo_j = field(*box, "lower");
        const Json* hi_j = field(*box, "upper");
        if (!lo_j || !hi_j) {
            ctx.add(path + ".box", "requires \"lower\" and \"upper\"");
            return std::nullopt;
        }
        auto lo = parse_int_vector(*lo_j, path + ".box.lower", ctx);
        auto hi = parse_int_vector(*hi_j, path + ".box.upper", ctx);
        if (!lo || !hi) return std::nullopt;
        if (lo->size() != hi->size()) {
            ctx.add(path + ".box", "lower has dimension " + std::to_string(lo->size()) +
                                       " but upper has dimension " + std::to_string(hi->size()));
            return std::nullopt;
        }
        double count = 1.0;
        for (std::size_t i = 0; i < lo->size(); ++i) {
            if ((*lo)[i] > (*hi)[i]) {
                ctx.add(path + ".box", "lower exceeds upper in component " + std::to_string(i));
                return std::nullopt;
            }
            count *= static_cast<double>((*hi)[i] - (*lo)[i] + 1);
        }
        if (count > static_cast<double>(kMaxLatticePoints)) {
            ctx.add(path + ".box", "box contains more than " +
                                       std::to_string(kMaxLatticePoints) + " points");
            return std::nullopt;
        }
        return generate_box_lattice(LatticePoint(*lo), LatticePoint(*hi));
    }

    if (!points->is_array() || points->empty()) {
        ctx.add(path + ".points", "must be a nonempty array of integer tuples");
        return std::nullopt;
    }
    if (points->size() > kMaxLatticePoints) {
        ctx.add(path + ".points",
                "more than " + std::to_string(kMaxLatticePoints) + " points");
        return std::nullopt;
    }
    std::vector<LatticePoint> pts;
    pts.reserve(points->size());
    for (std::size_t i = 0; i < points->size(); ++i) {
        auto tuple = parse_int_vector((*points)[i], path + ".points[" + std::to_string(i) + "]",
                                      ctx);
        if (!tuple) return std::nullopt;
        pts.emplace_back(*tuple);
        if (pts.back().dimension() != pts.front().dimension()) {
            ctx.add(path + ".points[" + std::to_string(i) + "]",
                    "dimension " + std::to_string(pts.back().dimension()) +
                        " differs from the first point's dimension " +
                        std::to_string(pts.front().dimension()));
            return std::nullopt;
        }
    }
    return Lattice(std::move(pts));
}

std::optional<PolynomialTerm> parse_term(const Json& j, const std::string& path, int arity,
                                         Ctx& ctx) {
    if (!j.is_object()) {
        ctx.add(path, "must be an object");
        return std::nullopt;
    }
    check_keys(j, path, {"coefficient", "exponents"}, ctx);
    const auto coeff = get_number(j, path, "coefficient", ctx);
    const Json* exps_j = field(j, "exponents");
    if (!coeff || !exps_j) {
        ctx.add(path, "requires \"coefficient\" and \"exponents\"");
        return std::nullopt;
    }
    auto exps = parse_int_vector(*exps_j, path + ".exponents", ctx);
    if (!exps) return std::nullopt;
    if (static_cast<int>(exps->size()) != arity) {
        ctx.add(path + ".exponents", "expected " + std::to_string(arity) +
                                         " exponents, got " + std::to_string(exps->size()));
        return std::nullopt;
    }
    PolynomialTerm term;
    term.coefficient = *coeff;
    term.exponents.reserve(exps->size());
    for (std::int64_t e : *exps) {
        if (e < 0) {
            ctx.add(path + ".exponents", "exponents must be nonnegative");
            return std::nullopt;
        }
        term.exponents.push_back(static_cast<int>(e));
    }
    return term;
}

std::optional<std::vector<PolynomialTerm>> parse_terms(const Json& j, const std::string& path,
                                                       int arity, Ctx& ctx) {
    if (!j.is_array() || j.empty()) {
        ctx.add(path, "must be a nonempty array of terms");
        return std::nullopt;
    }
    std::vector<PolynomialTerm> terms;
    terms.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        auto term = parse_term(j[i], path + "[" + std::to_string(i) + "]", arity, ctx);
        if (!term) return std::nullopt;
        terms.push_back(std::move(*term));
    }
    return terms;
}

double parse_working_radius(const Json& j, const std::string& path, Ctx& ctx) {
    const auto wr = get_number(j, path, "working_radius", ctx);
    if (!wr) return std::numeric_limits<double>::infinity();
    if (!(*wr > 0.0)) {
        ctx.add(path + ".working_radius", "must be positive");
        return std::numeric_limits<double>::infinity();
    }
    return *wr;
}

std::shared_ptr<const Manifold> parse_manifold(const Json& j, Ctx& ctx) {
    const std::string path = "manifold";
    if (!j.is_object()) {
        ctx.add(path, "must be an object");
        return nullptr;
    }
    const auto kind = get_string(j, path, "kind", ctx);
    if (!kind) {
        ctx.add(path + ".kind", "required");
        return nullptr;
    }
    const std::size_t before = ctx.diags.size();

    try {
        if (*kind == "plane") {
            check_keys(j, path, {"kind", "normal", "offset", "working_radius"}, ctx);
            const Json* normal_j = field(j, "normal");
            if (!normal_j) {
                ctx.add(path + ".normal", "required");
                return nullptr;
            }
            auto normal = parse_real_vector(*normal_j, path + ".normal", ctx);
            const double offset = get_number(j, path, "offset", ctx).value_or(0.0);
            const double wr = parse_working_radius(j, path, ctx);
            if (!normal || ctx.diags.size() != before) return nullptr;
            if (normal->size() < 2) {
                ctx.add(path + ".normal", "needs at least 2 components");
                return nullptr;
            }
            return make_plane(*normal, offset, wr);
        }
        if (*kind == "sphere") {
            check_keys(j, path, {"kind", "center", "radius", "working_radius"}, ctx);
            const Json* center_j = field(j, "center");
            const auto radius = get_number(j, path, "radius", ctx);
            if (!center_j || !radius) {
                ctx.add(path, "requires \"center\" and \"radius\"");
                return nullptr;
            }
            auto center = parse_real_vector(*center_j, path + ".center", ctx);
            const double wr = parse_working_radius(j, path, ctx);
            if (!center || ctx.diags.size() != before) return nullptr;
            if (center->size() < 2) {
                ctx.add(path + ".center", "needs at least 2 components");
                return nullptr;
            }
            if (!(*radius > 0.0)) {
                ctx.add(path + ".radius", "must be positive");
                return nullptr;
            }
            return make_sphere(*center, *radius, wr);
        }
        if (*kind == "cylinder") {
            check_keys(j, path, {"kind", "center", "radius", "working_radius"}, ctx);
            const Json* center_j = field(j, "center");
            const auto radius = get_number(j, path, "radius", ctx);
            if (!center_j || !radius) {
                ctx.add(path, "requires \"center\" and \"radius\"");
                return nullptr;
            }
            auto center = parse_real_vector(*center_j, path + ".center", ctx);
            const double wr = parse_working_radius(j, path, ctx);
            if (!center || ctx.diags.size() != before) return nullptr;
            if (center->size() != 3) {
                ctx.add(path + ".center", "must have exactly 3 components");
                return nullptr;
            }
            if (!(*radius > 0.0)) {
                ctx.add(path + ".radius", "must be positive");
                return nullptr;
            }
            return make_cylinder(Eigen::Vector3d(*center), *radius, wr);
        }
        if (*kind == "torus") {
            check_keys(j, path,
                       {"kind", "center", "major_radius", "minor_radius", "working_radius"},
                       ctx);
            const Json* center_j = field(j, "center");
            const auto major = get_number(j, path, "major_radius", ctx);
            const auto minor = get_number(j, path, "minor_radius", ctx);
            if (!center_j || !major || !minor) {
                ctx.add(path, "requires \"center\", \"major_radius\" and \"minor_radius\"");
                return nullptr;
            }
            auto center = parse_real_vector(*center_j, path + ".center", ctx);
            const double wr = parse_working_radius(j, path, ctx);
            if (!center || ctx.diags.size() != before) return nullptr;
            if (center->size() != 3) {
                ctx.add(path + ".center", "must have exactly 3 components");
                return nullptr;
            }
            if (!(*major > 0.0) || !(*minor > 0.0) || !(*minor < *major)) {
                ctx.add(path, "radii must satisfy 0 < minor_radius < major_radius");
                return nullptr;
            }
            return make_torus(Eigen::Vector3d(*center), *major, *minor, wr);
        }
        if (*kind == "implicit-polynomial") {
            check_keys(j, path, {"kind", "ambient_dimension", "terms", "working_radius"}, ctx);
            const auto dim = get_integer(j, path, "ambient_dimension", ctx);
            const Json* terms_j = field(j, "terms");
            if (!dim || !terms_j) {
                ctx.add(path, "requires \"ambient_dimension\" and \"terms\"");
                return nullptr;
            }
            if (*dim < 2 || *dim > 16) {
                ctx.add(path + ".ambient_dimension", "must be between 2 and 16");
                return nullptr;
            }
            auto terms = parse_terms(*terms_j, path + ".terms", static_cast<int>(*dim), ctx);
            const double wr = parse_working_radius(j, path, ctx);
            if (!terms || ctx.diags.size() != before) return nullptr;
            return make_polynomial_surface(static_cast<int>(*dim), std::move(*terms), wr);
        }
        if (*kind == "chart-grid") {
            check_keys(j, path,
                       {"kind", "components", "domain_lower", "domain_upper", "working_radius"},
                       ctx);
            const Json* comps_j = field(j, "components");
            const Json* lo_j = field(j, "domain_lower");
            const Json* hi_j = field(j, "domain_upper");
            if (!comps_j || !lo_j || !hi_j) {
                ctx.add(path,
                        "requires \"components\", \"domain_lower\" and \"domain_upper\"");
                return nullptr;
            }
            auto lo = parse_real_vector(*lo_j, path + ".domain_lower", ctx);
            auto hi = parse_real_vector(*hi_j, path + ".domain_upper", ctx);
            if (!lo || !hi) return nullptr;
            if (lo->size() != hi->size()) {
                ctx.add(path, "domain_lower and domain_upper dimensions differ");
                return nullptr;
            }
            for (Eigen::Index i = 0; i < lo->size(); ++i)
                if (!((*lo)[i] < (*hi)[i])) {
                    ctx.add(path, "domain_lower must be strictly below domain_upper in component " +
                                      std::to_string(i));
                    return nullptr;
                }
            const int k = static_cast<int>(lo->size());
            if (!comps_j->is_array() || comps_j->size() < 2) {
                ctx.add(path + ".components", "must be an array of at least 2 component term lists");
                return nullptr;
            }
            if (static_cast<int>(comps_j->size()) <= k) {
                ctx.add(path, "need parameter dimension " + std::to_string(k) +
                                  " below ambient dimension " +
                                  std::to_string(comps_j->size()));
                return nullptr;
            }
            std::vector<std::vector<PolynomialTerm>> components;
            components.reserve(comps_j->size());
            for (std::size_t i = 0; i < comps_j->size(); ++i) {
                auto terms = parse_terms((*comps_j)[i],
                                         path + ".components[" + std::to_string(i) + "]", k,
                                         ctx);
                if (!terms) return nullptr;
                components.push_back(std::move(*terms));
            }
            const double wr = parse_working_radius(j, path, ctx);
            if (ctx.diags.size() != before) return nullptr;
            return make_polynomial_chart(std::move(components), *lo, *hi, wr);
        }
    } catch (const Error& e) {
        ctx.add(path, e.what());
        return nullptr;
    }

    ctx.add(path + ".kind",
            "unknown manifold kind \"" + *kind +
                "\" (expected plane, sphere, cylinder, torus, implicit-polynomial or "
                "chart-grid)");
    return nullptr;
}

void parse_fields_block(const Json& j, RunConfig& config, Ctx& ctx) {
    const std::string path = "fields";
    if (!j.is_object()) {
        ctx.add(path, "must be an object");
        return;
    }
    check_keys(j, path, {"activation", "reinforcement"}, ctx);

    if (const Json* act = field(j, "activation")) {
        if (!act->is_object()) {
            ctx.add(path + ".activation", "must be an object");
        } else {
            check_keys(*act, path + ".activation", {"epsilon"}, ctx);
            if (const auto eps = get_number(*act, path + ".activation", "epsilon", ctx)) {
                if (!(*eps > 0.0) || !std::isfinite(*eps))
                    ctx.add(path + ".activation.epsilon", "must be positive and finite");
                else
                    config.activation_epsilon = *eps;
            }
        }
    }

    const Json* reinf = field(j, "reinforcement");
    if (!reinf) return;
    if (!reinf->is_object()) {
        ctx.add(path + ".reinforcement", "must be an object");
        return;
    }
    check_keys(*reinf, path + ".reinforcement", {"regions"}, ctx);
    const Json* regions = field(*reinf, "regions");
    if (!regions) return;
    if (!regions->is_array()) {
        ctx.add(path + ".reinforcement.regions", "must be an array");
        return;
    }
    for (std::size_t i = 0; i < regions->size(); ++i) {
        const std::string rpath = path + ".reinforcement.regions[" + std::to_string(i) + "]";
        const Json& r = (*regions)[i];
        if (!r.is_object()) {
            ctx.add(rpath, "must be an object");
            continue;
        }
        const auto kind = get_string(r, rpath, "kind", ctx);
        if (!kind) {
            ctx.add(rpath + ".kind", "required");
            continue;
        }
        if (*kind == "ball") {
            check_keys(r, rpath, {"kind", "center", "radius"}, ctx);
            const Json* center_j = field(r, "center");
            const auto radius = get_number(r, rpath, "radius", ctx);
            if (!center_j || !radius) {
                ctx.add(rpath, "requires \"center\" and \"radius\"");
                continue;
            }
            auto center = parse_real_vector(*center_j, rpath + ".center", ctx);
            if (!center) continue;
            if (!(*radius >= 0.0)) {
                ctx.add(rpath + ".radius", "must be nonnegative");
                continue;
            }
            config.regions.push_back(Ball{std::move(*center), *radius});
        } else if (*kind == "box") {
            check_keys(r, rpath, {"kind", "lower", "upper"}, ctx);
            const Json* lo_j = field(r, "lower");
            const Json* hi_j = field(r, "upper");
            if (!lo_j || !hi_j) {
                ctx.add(rpath, "requires \"lower\" and \"upper\"");
                continue;
            }
            auto lo = parse_real_vector(*lo_j, rpath + ".lower", ctx);
            auto hi = parse_real_vector(*hi_j, rpath + ".upper", ctx);
            if (!lo || !hi) continue;
            if (lo->size() != hi->size()) {
                ctx.add(rpath, "lower and upper dimensions differ");
                continue;
            }
            bool ordered = true;
            for (Eigen::Index c = 0; c < lo->size(); ++c)
                if ((*lo)[c] > (*hi)[c]) ordered = false;
            if (!ordered) {
                ctx.add(rpath, "lower exceeds upper");
                continue;
            }
            config.regions.push_back(Box{std::move(*lo), std::move(*hi)});
        } else {
            ctx.add(rpath + ".kind", "unknown region kind \"" + *kind +
                                         "\" (expected ball or box)");
        }
    }
}

void parse_objective_block(const Json& j, RunConfig& config, Ctx& ctx) {
    const std::string path = "objective";
    if (!j.is_object()) {
        ctx.add(path, "must be an object");
        return;
    }
    check_keys(j, path, {"alpha", "beta", "lambda", "gamma", "kappa_w"}, ctx);
    if (const auto v = get_number(j, path, "alpha", ctx)) config.objective.alpha = *v;
    if (const auto v = get_number(j, path, "beta", ctx)) config.objective.beta = *v;
    if (const auto v = get_number(j, path, "lambda", ctx)) config.objective.lambda = *v;
    if (const auto v = get_number(j, path, "gamma", ctx)) config.objective.gamma = *v;
    if (const auto v = get_number(j, path, "kappa_w", ctx)) config.objective.kappa_w = *v;
    try {
        config.objective.validate();
    } catch (const Error& e) {
        ctx.add(path, e.what());
    }
}

void parse_optimizer_block(const Json& j, RunConfig& config, Ctx& ctx) {
    const std::string path = "optimizer";
    if (!j.is_object()) {
        ctx.add(path, "must be an object");
        return;
    }
    check_keys(j, path, {"grad_tol", "max_iters", "initial_step", "seed"}, ctx);
    if (const auto v = get_number(j, path, "grad_tol", ctx)) {
        if (!(*v >= 0.0) || !std::isfinite(*v))
            ctx.add(path + ".grad_tol", "must be nonnegative and finite");
        else
            config.optimizer.grad_tol = *v;
    }
    if (const auto v = get_integer(j, path, "max_iters", ctx)) {
        if (*v < 0)
            ctx.add(path + ".max_iters", "must be nonnegative");
        else
            config.optimizer.max_iters = static_cast<int>(*v);
    }
    if (const auto v = get_number(j, path, "initial_step", ctx)) {
        if (!(*v > 0.0) || !std::isfinite(*v))
            ctx.add(path + ".initial_step", "must be positive and finite");
        else
            config.optimizer.step.initial_step = *v;
    }
    if (const auto v = get_integer(j, path, "seed", ctx)) {
        if (*v < 0)
            ctx.add(path + ".seed", "must be nonnegative");
        else
            config.optimizer.seed = static_cast<std::uint64_t>(*v);
    }
}

void parse_output_block(const Json& j, RunConfig& config, Ctx& ctx) {
    const std::string path = "output";
    if (!j.is_object()) {
        ctx.add(path, "must be an object");
        return;
    }
    check_keys(j, path, {"directory", "points_csv", "edges_csv", "report"}, ctx);
    const auto set = [&](const char* key, std::string OutputPaths::*member) {
        if (const auto v = get_string(j, path, key, ctx)) {
            if (v->empty())
                ctx.add(path + "." + key, "must not be empty");
            else
                config.output.*member = *v;
        }
    };
    set("directory", &OutputPaths::directory);
    set("points_csv", &OutputPaths::points_csv);
    set("edges_csv", &OutputPaths::edges_csv);
    set("report", &OutputPaths::report);
}

}  // namespace

ConfigParse parse_config_text(const std::string& text) {
    ConfigParse out;
    Ctx ctx{out.diagnostics};

    Json root;
    try {
        root = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = line_col(text, e.byte);
        ctx.add("config", "parse error at line " + std::to_string(line) + ", column " +
                              std::to_string(col));
        return out;
    }
    if (!root.is_object()) {
        ctx.add("config", "top level must be an object");
        return out;
    }
    check_keys(root, "config", {"lattice", "manifold", "fields", "objective", "optimizer", "output"},
               ctx);

    const Json* lattice_j = field(root, "lattice");
    const Json* manifold_j = field(root, "manifold");
    if (!lattice_j) ctx.add("lattice", "required");
    if (!manifold_j) ctx.add("manifold", "required");

    std::optional<Lattice> lattice;
    if (lattice_j) lattice = parse_lattice(*lattice_j, ctx);
    if (manifold_j) out.config.manifold = parse_manifold(*manifold_j, ctx);
    if (const Json* j = field(root, "fields")) parse_fields_block(*j, out.config, ctx);
    if (const Json* j = field(root, "objective")) parse_objective_block(*j, out.config, ctx);
    if (const Json* j = field(root, "optimizer")) parse_optimizer_block(*j, out.config, ctx);
    if (const Json* j = field(root, "output")) parse_output_block(*j, out.config, ctx);

    if (lattice && out.config.manifold &&
        lattice->dimension() != out.config.manifold->ambient_dimension())
        ctx.add("lattice", "lattice dimension " + std::to_string(lattice->dimension()) +
                               " does not match manifold ambient dimension " +
                               std::to_string(out.config.manifold->ambient_dimension()));
    if (out.config.manifold) {
        for (std::size_t i = 0; i < out.config.regions.size(); ++i) {
            const Region& r = out.config.regions[i];
            const int dim = std::holds_alternative<Ball>(r)
                                ? static_cast<int>(std::get<Ball>(r).center.size())
                                : static_cast<int>(std::get<Box>(r).lower.size());
            if (dim != out.config.manifold->ambient_dimension())
                ctx.add("fields.reinforcement.regions[" + std::to_string(i) + "]",
                        "region dimension " + std::to_string(dim) +
                            " does not match manifold ambient dimension " +
                            std::to_string(out.config.manifold->ambient_dimension()));
        }
    }

    if (lattice) out.config.lattice = std::move(*lattice);
    return out;
}

ConfigParse parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        ConfigParse out;
        out.diagnostics.push_back(path + ": cannot open file");
        return out;
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config_text(text);
}

namespace {

void write_points_csv(const std::filesystem::path& file, const Lattice& lattice,
                      const EmbeddingState& state, const OptimizationReport& report) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot write " + file.string());
    const int n = lattice.dimension();

    for (int i = 0; i < n; ++i) out << "lat_" << i << ",";
    for (int i = 0; i < n; ++i) out << "init_" << i << ",";
    for (int i = 0; i < n; ++i) out << "final_" << i << ",";
    out << "alignment,reinforcement,activation_penalty,curvature_penalty,total\n";

    for (std::size_t row = 0; row < lattice.size(); ++row) {
        const LatticePoint& q = lattice[row];
        const ContinuousPoint init = embed(q);
        const ContinuousPoint& fin = state.positions[row];
        const ObjectiveBreakdown& b = report.point_breakdowns[row];
        for (int i = 0; i < n; ++i) out << q[i] << ",";
        for (int i = 0; i < n; ++i) out << format_double(init[i]) << ",";
        for (int i = 0; i < n; ++i) out << format_double(fin[i]) << ",";
        out << format_double(b.alignment) << "," << format_double(b.reinforcement) << ","
            << format_double(b.activation_penalty) << "," << format_double(b.curvature_penalty)
            << "," << format_double(b.total) << "\n";
    }
}

void write_edges_csv(const std::filesystem::path& file, const Lattice& lattice) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot write " + file.string());
    out << "a,b\n";
    for (const auto& [a, b] : adjacent_pairs(lattice)) out << a << "," << b << "\n";
}

void write_report(const std::filesystem::path& file, const RunConfig& config, int threads,
                  const OptimizationReport& report) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot write " + file.string());
    out << "termination = " << to_string(report.termination) << "\n";
    out << "iterations = " << report.iterations << "\n";
    out << "points = " << config.lattice.size() << "\n";
    out << "seed = " << config.optimizer.seed << "\n";
    out << "threads = " << threads << "\n";
    out << "final_gradient_sup_norm = " << format_double(report.final_gradient_sup_norm)
        << "\n";
    out << "alignment = " << format_double(report.final_breakdown.alignment) << "\n";
    out << "reinforcement = " << format_double(report.final_breakdown.reinforcement) << "\n";
    out << "activation_penalty = " << format_double(report.final_breakdown.activation_penalty)
        << "\n";
    out << "curvature_penalty = " << format_double(report.final_breakdown.curvature_penalty)
        << "\n";
    out << "total = " << format_double(report.final_breakdown.total) << "\n";
    out << "min_pairwise_distance = " << format_double(report.min_pairwise_distance) << "\n";
    out << "medial_axis_nudges = " << report.medial_axis_nudges << "\n";
    out << "line_search_failures = " << report.line_search_failures << "\n";
    out << "gradient_is_approximate = " << (report.gradient_is_approximate ? 1 : 0) << "\n";
    for (std::size_t k = 0; k < report.objective_trace.size(); ++k)
        out << "objective[" << k << "] = " << format_double(report.objective_trace[k]) << "\n";
}

}  // namespace

RunOutcome run_config(const RunConfig& config, int threads) {
    if (!config.manifold) throw Error("run_config: missing manifold");
    RunOutcome out;

    OptimizerOptions options = config.optimizer;
    options.threads = threads > 0 ? threads : 1;

    std::filesystem::path dir = config.output.directory;
    if (const char* env = std::getenv("LATEMBED_OUTPUT_DIR"); env && *env) dir = env;

    FieldSet fields{ActivationField(config.manifold, config.activation_epsilon),
                    ReinforcementField(config.regions)};
    auto [state, report] =
        optimize(config.lattice, *config.manifold, fields, config.objective, options);

    std::filesystem::create_directories(dir);
    const auto points_path = dir / config.output.points_csv;
    const auto edges_path = dir / config.output.edges_csv;
    const auto report_path = dir / config.output.report;
    write_points_csv(points_path, config.lattice, state, report);
    write_edges_csv(edges_path, config.lattice);
    write_report(report_path, config, options.threads, report);
    out.files_written = {points_path.string(), edges_path.string(), report_path.string()};

    out.termination = report.termination;
    out.exit_code = report.termination == Termination::kConverged ? 0 : 3;
    return out;
}

RunOutcome run_config_file(const std::string& path, int threads) {
    ConfigParse parsed = parse_config_file(path);
    if (!parsed.ok()) {
        RunOutcome out;
        out.exit_code = 2;
        out.diagnostics = std::move(parsed.diagnostics);
        return out;
    }
    return run_config(parsed.config, threads);
}

std::vector<std::string> demo_names() { return {"plane", "sphere", "torus"}; }

std::string demo_config_text(const std::string& name) {
    Json j;
    if (name == "plane") {
        j["lattice"] = {{"box", {{"lower", {0, 0, 1}}, {"upper", {4, 4, 1}}}}};
        j["manifold"] = {{"kind", "plane"}, {"normal", {0.0, 0.0, 1.0}}, {"offset", 0.0}};
        j["output"] = {{"directory", "latembed_plane"}};
    } else if (name == "sphere") {
        j["lattice"] = {{"box", {{"lower", {-1, -1, -1}}, {"upper", {1, 1, 1}}}}};
        j["manifold"] = {{"kind", "sphere"}, {"center", {0.0, 0.0, 0.0}}, {"radius", 1.0}};
        j["output"] = {{"directory", "latembed_sphere"}};
    } else if (name == "torus") {
        j["lattice"] = {{"box", {{"lower", {1, -1, -1}}, {"upper", {3, 1, 1}}}}};
        j["manifold"] = {{"kind", "torus"},
                         {"center", {0.0, 0.0, 0.0}},
                         {"major_radius", 2.0},
                         {"minor_radius", 0.5}};
        j["output"] = {{"directory", "latembed_torus"}};
    } else {
        throw Error("unknown demo \"" + name + "\" (expected plane, sphere or torus)");
    }
    j["fields"] = {{"activation", {{"epsilon", 0.25}}}};
    j["objective"] = {{"alpha", 1.0}, {"beta", 1.0}, {"lambda", 0.0}, {"gamma", 1.0},
                      {"kappa_w", 0.0}};
    j["optimizer"] = {{"grad_tol", 1e-6}, {"max_iters", 10000}, {"initial_step", 0.1},
                      {"seed", 0}};
    return j.dump(2) + "\n";
}

}  // namespace latembed
