#include "bvqlab/runner.hpp"

#include <bvq/error.hpp>
#include <bvq/field_io.hpp>
#include <bvq/functionals.hpp>
#include <bvq/gallery.hpp>
#include <bvq/jumps.hpp>
#include <bvq/lusin.hpp>
#include <bvq/oscillation.hpp>
#include <bvq/parallel.hpp>
#include <bvq/special.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "bvqlab/config.hpp"

namespace bvqlab {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kSchema = 1;

const std::vector<std::string> kKeys = {
    "schema", "seed", "tolerance", "output.dir", "q", "s", "window",
    "field.gallery", "field.import", "field.dim", "field.cells", "field.lower", "field.upper", "field.compact_support",
    "schedule.eps_max", "schedule.ratio", "schedule.count",
    "constants.max_dim", "constants.gamma_max_dim",
    "besov.limit_tolerance", "besov.rule", "besov.translation",
    "oscillation.points", "oscillation.fit",
    "thresholds.abs", "thresholds.rel", "thresholds.window", "thresholds.decay_ratio", "thresholds.rate_ratio",
    "jumps.rho", "jumps.jump_min", "jumps.residual_rel", "jumps.scale_ratio", "jumps.classical_rel",
    "verify.source", "verify.use_upper", "verify.sandwich",
    "lusin.K.lower", "lusin.K.upper", "lusin.r", "lusin.levels", "lusin.eps_measure", "lusin.H", "lusin.audit_pairs",
    "export.path", "export.encoding"};
const std::vector<std::string> kPrefixes = {"field.param."};

// Files produced by a run, written only once every stage has succeeded.
using Artifacts = std::vector<std::pair<std::string, std::string>>;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json to_json(const bvq::LimitEstimate& e) {
    json j;
    j["eps"] = e.eps;
    j["values"] = e.values;
    j["window"] = e.window;
    j["liminf"] = number(e.liminf);
    j["limsup"] = number(e.limsup);
    j["sup"] = number(e.sup);
    j["monotonicity"] = bvq::to_string(e.monotonicity);
    j["order"] = number(e.order);
    j["relative_spread"] = number(e.relative_spread());
    return j;
}

json to_json(const bvq::BesovConstants& b) {
    json j;
    j["hat"] = number(b.hat);
    j["upper"] = number(b.upper);
    j["lower"] = number(b.lower);
    j["limit"] = b.limit ? number(*b.limit) : json(nullptr);
    j["limit_tolerance"] = b.limit_tolerance;
    j["estimate"] = to_json(b.estimate);
    return j;
}

json to_json(const bvq::Verdict& v) {
    return {{"value", v.value}, {"statistic", number(v.statistic)}, {"threshold", v.threshold}, {"evidence", v.evidence}};
}

json to_json(const bvq::JumpFit& f) {
    return {{"h", f.h}, {"nu", f.nu}, {"c", f.c}, {"residual", f.residual}, {"rho", f.rho}, {"jump_norm", f.jump_norm()}};
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string eps_table(const bvq::LimitEstimate& e, const std::string& name) {
    std::ostringstream os;
    bvq::write_eps_table(os, e, name);
    return os.str();
}

struct Stopwatch {
    json* sink;
    std::string stage;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    ~Stopwatch() {
        (*sink)[stage] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

// ---------------------------------------------------------------------------

struct FieldSetup {
    bvq::GalleryEntry entry;
    json description;
};

bvq::Point to_point(const std::vector<double>& v, int dim, const std::string& key) {
    if (static_cast<int>(v.size()) != dim)
        throw ConfigError("config key '" + key + "': expected " + std::to_string(dim) + " coordinates");
    bvq::Point p{0, 0, 0};
    for (int a = 0; a < dim; ++a) p[a] = v[static_cast<std::size_t>(a)];
    return p;
}

FieldSetup load_field(const Config& cfg) {
    const bool has_gallery = cfg.has("field.gallery"), has_import = cfg.has("field.import");
    if (!has_gallery && !has_import) throw ConfigError("config: set field.gallery or field.import");
    json d;
    std::optional<bvq::GalleryEntry> entry;
    const std::string name = cfg.get_string("field.gallery", "bi_holder_user");
    if (has_import) {
        const std::string path = cfg.get_string("field.import");
        bvq::Field samples = [&] {
            try {
                return bvq::read_field(std::filesystem::path(path));
            } catch (const std::exception& e) {
                throw ConfigError("config key 'field.import': " + std::string(e.what()));
            }
        }();
        if (name != "bi_holder_user")
            throw ConfigError("config: field.import combines only with field.gallery = bi_holder_user");
        entry = bvq::gallery_user_samples(samples);
        d["source"] = "import";
        d["path"] = path;
    } else {
        const auto& info = bvq::catalog_info(name);
        const int dim = cfg.get_int("field.dim", info.dims.front());
        const int fallback_cells = dim == 1 ? 2048 : dim == 2 ? 256 : 32;
        const auto cells_list = cfg.get_list("field.cells", std::vector<double>{double(fallback_cells)});
        std::vector<int> cells;
        for (double c : cells_list) {
            if (c != std::floor(c)) throw ConfigError("config key 'field.cells': cell counts must be integers");
            cells.push_back(static_cast<int>(c));
        }
        if (cells.size() == 1) cells.assign(static_cast<std::size_t>(dim), cells.front());
        bvq::Params params;
        for (const auto& [k, v] : cfg.with_prefix("field.param.")) params[k] = cfg.get_double("field.param." + k);
        bvq::Domain domain = [&] {
            if (cfg.has("field.lower") || cfg.has("field.upper")) {
                const auto lo = cfg.get_list("field.lower"), hi = cfg.get_list("field.upper");
                return bvq::make_domain(dim, lo, hi, cells);
            }
            const auto base = bvq::default_domain(name, dim, cells.front());
            return base.refined(cells);
        }();
        entry = bvq::gallery(name, domain, params);
        d["source"] = "gallery";
        d["catalog"] = name;
        json pj = json::object();
        for (const auto& [k, v] : entry->field.analytic()->params) pj[k] = v;
        d["params"] = pj;
    }
    if (cfg.get_bool("field.compact_support", false)) entry->field = entry->field.with_compact_support(true);
    FieldSetup fs{std::move(*entry), std::move(d)};
    const auto& dom = fs.entry.field.domain();
    const int n = dom.dim();
    json& d2 = fs.description;
    d2["dim"] = n;
    d2["codomain_dim"] = fs.entry.field.codim();
    d2["lower"] = std::vector<double>(dom.lower().begin(), dom.lower().begin() + n);
    d2["upper"] = std::vector<double>(dom.upper().begin(), dom.upper().begin() + n);
    d2["cells"] = std::vector<int>(dom.cells().begin(), dom.cells().begin() + n);
    d2["masked_fraction"] = fs.entry.field.masked_fraction();
    return fs;
}

bvq::EpsilonSchedule load_schedule(const Config& cfg, const bvq::Domain& d, double factor) {
    const double h = d.max_spacing();
    const double eps_max = cfg.get_double("schedule.eps_max", std::min(0.2, 0.25 * d.diameter()));
    const double ratio = cfg.get_double("schedule.ratio", 0.7);
    int fallback = 1;
    while (fallback < 12 && eps_max * std::pow(ratio, fallback) >= factor * h) ++fallback;
    try {
        return bvq::make_schedule(eps_max, ratio, cfg.get_int("schedule.count", fallback));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config schedule: ") + e.what());
    }
}

// ---------------------------------------------------------------------------

struct Context {
    Config cfg;
    RunOptions opts;
    double tolerance = 0.05;
    std::uint64_t seed = 0;
    json report;
    json timings = json::object();
    Artifacts files;
    bool verdicts_pass = true;
};

using Plan = std::function<void(Context&)>;

Plan plan_constants(Context& ctx) {
    const int max_dim = ctx.cfg.get_int("constants.max_dim", 5);
    const int gamma_max = ctx.cfg.get_int("constants.gamma_max_dim", 10);
    if (max_dim < 1 || gamma_max < 1) throw ConfigError("config: constants dimensions must be positive");
    return [=](Context& c) {
        Stopwatch sw{&c.timings, "constants"};
        json rows = json::array();
        std::ostringstream tab;
        tab << "# N alpha(N) C_N C_N_sphere C_N_ball gamma(N)\n";
        tab.precision(17);
        bool ok = true;
        for (int n = 1; n <= std::max(max_dim, gamma_max); ++n) {
            json r;
            r["N"] = n;
            r["alpha"] = bvq::alpha(n);
            const double cn = bvq::c_dimensional(n, bvq::CMethod::closed_form);
            r["C_N"] = cn;
            const double g = bvq::gamma_lower(n);
            r["gamma"] = g;
            r["gamma_below_C_N"] = g < cn;
            ok = ok && g < cn;
            json sphere = nullptr, ball = nullptr;
            if (n <= max_dim) {
                if (n <= 7) sphere = bvq::c_dimensional(n, bvq::CMethod::sphere_quadrature);
                if (n <= 4) ball = bvq::c_dimensional(n, bvq::CMethod::ball_quadrature);
                tab << n << ' ' << bvq::alpha(n) << ' ' << cn << ' ' << (sphere.is_null() ? NAN : sphere.get<double>())
                    << ' ' << (ball.is_null() ? NAN : ball.get<double>()) << ' ' << g << '\n';
            }
            r["C_N_sphere"] = sphere;
            r["C_N_ball"] = ball;
            rows.push_back(r);
        }
        c.report["results"]["constants"] = rows;
        c.report["verdicts"]["gamma_below_C_N"] = ok;
        c.verdicts_pass = c.verdicts_pass && ok;
        c.files.push_back({"constants.dat", tab.str()});
    };
}

bvq::BesovOptions besov_options(const Config& cfg) {
    bvq::BesovOptions o;
    o.window = cfg.get_int("window", 3);
    o.limit_tolerance = cfg.get_double("besov.limit_tolerance", 0.05);
    o.pair.s = cfg.get_double("s", 1.0);
    const auto rule = cfg.get_string("besov.rule", "automatic");
    if (rule == "automatic") o.pair.rule = bvq::KernelRule::automatic;
    else if (rule == "cell_center") o.pair.rule = bvq::KernelRule::cell_center;
    else if (rule == "cell_average") o.pair.rule = bvq::KernelRule::cell_average;
    else throw ConfigError("config key 'besov.rule': expected automatic, cell_center or cell_average");
    return o;
}

Plan plan_besov(Context& ctx, const FieldSetup& fs) {
    const auto& u = fs.entry.field;
    const double q = ctx.cfg.get_double("q", 2.0);
    if (!(q >= 1.0)) throw ConfigError("config key 'q': must be >= 1");
    const auto opts = besov_options(ctx.cfg);
    const auto sched = load_schedule(ctx.cfg, u.domain(), opts.pair.guard_factor);
    bvq::validate_schedule(sched, u.domain(), opts.pair.guard_factor, "besov schedule");
    const bool translation = ctx.cfg.get_bool("besov.translation", false);
    if (translation && !u.compact_support())
        throw ConfigError("config key 'besov.translation': needs field.compact_support = true");
    return [=](Context& c) {
        Stopwatch sw{&c.timings, "besov"};
        const auto b = bvq::besov_constants(u, q, sched, opts);
        c.report["results"]["besov"] = to_json(b);
        c.files.push_back({"besov_eps.dat", eps_table(b.estimate, "B_eps")});
        if (translation) {
            const auto t = bvq::besov_translation_seminorm(u, q, 1.0 / q, sched, opts.window);
            c.report["results"]["translation_seminorm"] = {{"value", t.value}, {"estimate", to_json(t.estimate)}};
            c.files.push_back({"translation_rho.dat", eps_table(t.estimate, "seminorm")});
        }
    };
}

bvq::Thresholds load_thresholds(const Config& cfg) {
    bvq::Thresholds t;
    t.abs = cfg.get_double("thresholds.abs", t.abs);
    t.rel = cfg.get_double("thresholds.rel", t.rel);
    t.window = cfg.get_int("thresholds.window", t.window);
    t.decay_ratio = cfg.get_double("thresholds.decay_ratio", t.decay_ratio);
    t.rate_ratio = cfg.get_double("thresholds.rate_ratio", t.rate_ratio);
    return t;
}

Plan plan_oscillation(Context& ctx, const FieldSetup& fs) {
    const auto& u = fs.entry.field;
    const int n = u.domain().dim();
    const auto sched = load_schedule(ctx.cfg, u.domain(), 2.0);
    bvq::validate_schedule(sched, u.domain(), 2.0, "oscillation schedule");
    const auto t = load_thresholds(ctx.cfg);
    std::vector<bvq::Point> points;
    if (ctx.cfg.has("oscillation.points")) {
        for (const auto& p : ctx.cfg.get_points("oscillation.points"))
            points.push_back(to_point(p, n, "oscillation.points"));
    } else {
        for (const auto& e : fs.entry.expected.points) points.push_back(e.x);
    }
    if (points.empty()) throw ConfigError("config: oscillation needs oscillation.points");
    for (const auto& p : points)
        if (!u.domain().contains(p)) throw ConfigError("config key 'oscillation.points': point outside the box");
    const bool fit = ctx.cfg.get_bool("oscillation.fit", true);
    const double q = ctx.cfg.get_double("q", 1.0);
    return [=](Context& c) {
        Stopwatch sw{&c.timings, "oscillation"};
        const double scale = bvq::oscillation_scale(u);
        json arr = json::array();
        std::ostringstream prof, verdicts;
        prof << "x,y,z,rho,inf_osc,mean_q_osc,mean_abs_dev\n";
        verdicts << "x,y,z,in_S,in_Sprime,in_Sdoubleprime,spread,osc_window_max,osc_window_min,threshold\n";
        prof.precision(17);
        verdicts.precision(17);
        bool nested = true;
        for (const auto& x : points) {
            auto pc = bvq::classify_point(u, x, sched, t, scale);
            const auto rec = bvq::oscillation_profile(u, x, sched.values(), q);
            json j;
            j["x"] = x;
            j["in_S"] = to_json(pc.in_S);
            j["in_Sprime"] = to_json(pc.in_Sprime);
            j["in_Sdoubleprime"] = to_json(pc.in_Sdoubleprime);
            const bool ok = (!pc.in_Sdoubleprime.value || pc.in_Sprime.value) && (!pc.in_Sprime.value || pc.in_S.value);
            nested = nested && ok;
            json recs = json::array();
            for (const auto& r : rec.records) {
                recs.push_back({{"rho", r.rho}, {"inf_osc", r.inf_osc}, {"mean_q_osc", r.mean_q_osc},
                                {"mean_abs_dev", r.mean_abs_dev}, {"mean", r.mean}});
                prof << x[0] << ',' << x[1] << ',' << x[2] << ',' << r.rho << ',' << r.inf_osc << ',' << r.mean_q_osc
                     << ',' << r.mean_abs_dev << '\n';
            }
            j["profile"] = recs;
            if (fit) {
                try {
                    j["step_fit"] = to_json(bvq::blowup_step_fit(u, x, sched.smallest()));
                } catch (const bvq::EmptyStencilError& e) {
                    j["step_fit"] = {{"error", e.what()}};
                }
            }
            verdicts << x[0] << ',' << x[1] << ',' << x[2] << ',' << pc.in_S.value << ',' << pc.in_Sprime.value << ','
                     << pc.in_Sdoubleprime.value << ',' << pc.in_S.statistic << ',' << pc.in_Sprime.statistic << ','
                     << pc.in_Sdoubleprime.statistic << ',' << pc.in_S.threshold << '\n';
            arr.push_back(j);
        }
        c.report["results"]["points"] = arr;
        c.report["results"]["oscillation_scale"] = scale;
        c.report["verdicts"]["nesting"] = nested;
        c.verdicts_pass = c.verdicts_pass && nested;
        c.files.push_back({"oscillation_profile.csv", prof.str()});
        c.files.push_back({"points.csv", verdicts.str()});
    };
}

bvq::JumpThresholds load_jump_thresholds(const Config& cfg) {
    bvq::JumpThresholds t;
    t.jump_min = cfg.get_double("jumps.jump_min", t.jump_min);
    t.residual_rel = cfg.get_double("jumps.residual_rel", t.residual_rel);
    t.scale_ratio = cfg.get_double("jumps.scale_ratio", t.scale_ratio);
    t.classical_rel = cfg.get_double("jumps.classical_rel", t.classical_rel);
    return t;
}

json describe(const bvq::JumpField& jf, double q) {
    std::size_t classical = 0;
    for (const auto& c : jf.cells) classical += c.classical;
    return {{"rho", jf.rho},
            {"detected_cells", jf.cells.size()},
            {"classical_cells", classical},
            {"elements", jf.elements.size()},
            {"measure", jf.measure()},
            {"mean_jump", jf.mean_jump()},
            {"q", q},
            {"q_jump_variation", bvq::q_jump_variation(jf, q)}};
}

Plan plan_jumps(Context& ctx, const FieldSetup& fs) {
    const auto& u = fs.entry.field;
    const double rho = ctx.cfg.get_double("jumps.rho", 4.0 * u.domain().max_spacing());
    bvq::require_radius(u.domain(), rho, 4.0, "jumps.rho");
    const auto t = load_jump_thresholds(ctx.cfg);
    const double q = ctx.cfg.get_double("q", 1.0);
    return [=](Context& c) {
        Stopwatch sw{&c.timings, "jumps"};
        const auto jf = bvq::detect_jumps(u, rho, t);
        json r = describe(jf, q);
        if (fs.entry.interface) {
            r["interface_measure"] = fs.entry.interface->measure();
            r["interface_q_jump_variation"] = bvq::q_jump_variation(*fs.entry.interface, q);
        }
        c.report["results"]["jumps"] = r;
        std::ostringstream csv, geo;
        bvq::write_jump_csv(csv, jf);
        bvq::write_interface_geometry(geo, jf);
        c.files.push_back({"jumps.csv", csv.str()});
        c.files.push_back({"interface.txt", geo.str()});
    };
}

Plan plan_verify(Context& ctx, const FieldSetup& fs) {
    const auto& u = fs.entry.field;
    const double q = ctx.cfg.get_double("q", 2.0);
    if (!(q >= 1.0)) throw ConfigError("config key 'q': must be >= 1");
    auto bopts = besov_options(ctx.cfg);
    const auto sched = load_schedule(ctx.cfg, u.domain(), bopts.pair.guard_factor);
    bvq::validate_schedule(sched, u.domain(), bopts.pair.guard_factor, "verify schedule");
    const bool has_spec = fs.entry.interface && !fs.entry.interface->pieces.empty();
    const std::string source = ctx.cfg.get_string("verify.source", has_spec ? "interface" : "none");
    if (source != "interface" && source != "detected" && source != "none")
        throw ConfigError("config key 'verify.source': expected interface, detected or none");
    if (source == "interface" && !fs.entry.interface)
        throw ConfigError("config key 'verify.source': the field has no interface description");
    const double rho = ctx.cfg.get_double("jumps.rho", 4.0 * u.domain().max_spacing());
    if (source == "detected") bvq::require_radius(u.domain(), rho, 4.0, "jumps.rho");
    const auto jt = load_jump_thresholds(ctx.cfg);
    bvq::InequalityOptions io;
    io.tolerance = ctx.tolerance;
    io.use_upper = ctx.cfg.get_bool("verify.use_upper", false);
    io.besov = bopts;
    const bool sandwich = ctx.cfg.get_bool("verify.sandwich", false);
    bvq::SandwichOptions so;
    so.tolerance = ctx.tolerance;
    so.besov = bopts;
    if (sandwich) {
        const double m = static_cast<double>(u.domain().cell_count());
        if (0.5 * m * (m - 1.0) > so.max_pairs)
            throw bvq::CostCapError("verify.sandwich: pairwise scan exceeds the cost cap", 0.5 * m * (m - 1.0),
                                    so.max_pairs);
    }
    return [=](Context& c) {
        Stopwatch sw{&c.timings, "verify"};
        bvq::InequalityVerdict v;
        if (source == "interface") {
            v = bvq::verify_jump_inequality(u, q, sched, *fs.entry.interface, io);
        } else if (source == "detected") {
            const auto jf = bvq::detect_jumps(u, rho, jt);
            c.report["results"]["jumps"] = describe(jf, q);
            v = bvq::verify_jump_inequality(u, q, sched, jf, io);
        } else {
            v = bvq::verify_jump_inequality(u, q, sched, bvq::InterfaceSpec{u.domain().dim(), {}}, io);
            v.lhs_source = "none";
        }
        json j;
        j["lhs"] = v.lhs;
        j["rhs"] = v.rhs;
        j["ratio"] = number(v.ratio);
        j["pass"] = v.pass;
        j["tolerance"] = v.tolerance;
        j["C_N"] = v.c_n;
        j["q_jump_variation"] = v.variation;
        j["gamma_lhs"] = v.gamma_lhs;
        j["gamma_pass"] = v.gamma_pass;
        j["rhs_is_upper"] = v.rhs_is_upper;
        j["lhs_source"] = v.lhs_source;
        j["rhs_source"] = v.rhs_is_upper ? "besov upper estimate" : "besov lower estimate";
        j["besov"] = to_json(v.besov);
        c.report["results"]["inequality"] = j;
        c.report["verdicts"]["inequality"] = v.pass;
        c.report["verdicts"]["gamma_bound"] = v.gamma_pass;
        c.verdicts_pass = c.verdicts_pass && v.pass && v.gamma_pass;
        c.files.push_back({"besov_eps.dat", eps_table(v.besov.estimate, "B_eps")});
        if (sandwich) {
            const auto s = bvq::sandwich_check(u, q, sched, so);
            c.report["results"]["sandwich"] = {{"applicable", s.applicable}, {"reason", s.reason},
                                               {"A1", s.A1}, {"A2", s.A2},
                                               {"lower_bound", s.lower_bound}, {"upper_bound", s.upper_bound},
                                               {"window", s.window}, {"pass", s.pass}};
            if (s.applicable) {
                c.report["verdicts"]["sandwich"] = s.pass;
                c.verdicts_pass = c.verdicts_pass && s.pass;
            }
        }
    };
}

Plan plan_lusin(Context& ctx, const FieldSetup& fs) {
    const auto& u = fs.entry.field;
    const auto& d = u.domain();
    const int n = d.dim();
    const double r = ctx.cfg.get_double("lusin.r", 0.5);
    const double q = ctx.cfg.get_double("q", 2.0);
    std::vector<double> lo_default(static_cast<std::size_t>(n)), hi_default(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        const double w = d.upper()[a] - d.lower()[a];
        lo_default[static_cast<std::size_t>(a)] = d.lower()[a] + 0.1 * w;
        hi_default[static_cast<std::size_t>(a)] = d.upper()[a] - 0.1 * w;
    }
    const auto klo = to_point(ctx.cfg.get_list("lusin.K.lower", lo_default), n, "lusin.K.lower");
    const auto khi = to_point(ctx.cfg.get_list("lusin.K.upper", hi_default), n, "lusin.K.upper");
    const auto K = d.cells_within(klo, khi);
    std::vector<int> levels;
    for (double v : ctx.cfg.get_list("lusin.levels", std::vector<double>{1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024}))
        levels.push_back(static_cast<int>(v));
    const double eps_measure = ctx.cfg.get_double("lusin.eps_measure", 0.01);
    const auto sched = load_schedule(ctx.cfg, d, 4.0);
    bvq::validate_schedule(sched, d, 4.0, "lusin schedule");
    bvq::HolderOptions ho;
    ho.seed = ctx.seed;
    ho.sample_pairs = static_cast<std::size_t>(ctx.cfg.get_int("lusin.audit_pairs", 1000000));
    const std::optional<double> H = ctx.cfg.has("lusin.H") ? std::optional<double>(ctx.cfg.get_double("lusin.H")) : std::nullopt;
    return [=](Context& c) {
        Stopwatch sw{&c.timings, "lusin"};
        const auto f = bvq::build_filtration(u, K, r, q, levels, sched);
        json filt;
        filt["levels"] = f.levels;
        filt["cutoffs"] = f.cutoffs;
        filt["removed"] = f.removed;
        filt["monotone"] = f.monotone;
        filt["smallest_delta"] = f.smallest_delta;
        filt["K_measure"] = f.k_measure;
        filt["warnings"] = f.warnings;
        std::ostringstream curve;
        curve << "# n removed_measure chebyshev_bound\n";
        curve.precision(17);
        const auto rows = bvq::exhaustion_report(u, f);
        json ex = json::array();
        for (const auto& row : rows) {
            curve << row.n << ' ' << row.removed << ' ' << row.chebyshev_bound << '\n';
            ex.push_back({{"n", row.n}, {"removed", row.removed}, {"chebyshev_bound", row.chebyshev_bound},
                          {"below", row.below}});
        }
        filt["exhaustion"] = ex;
        c.report["results"]["filtration"] = filt;
        c.files.push_back({"lusin_removed.dat", curve.str()});

        const auto sel = bvq::select_compact(f, eps_measure);
        const auto measured = bvq::holder_constant_on(u, sel.B, r, ho);
        const double h_used = H.value_or(measured.combined);
        const auto cert = bvq::holder_extend(u, sel.B, r, h_used, ho);
        const auto again = bvq::holder_extend(cert.extension, sel.B, r, h_used, ho);
        bool idempotent = true;
        for (std::size_t i = 0; i < d.cell_count() * static_cast<std::size_t>(u.codim()) && idempotent; ++i)
            idempotent = again.extension.values()[i] == cert.extension.values()[i];

        json cj;
        cj["n0"] = sel.n0;
        cj["eps_measure"] = eps_measure;
        cj["removed_measure"] = sel.removed;
        cj["warning"] = sel.warning;
        cj["r"] = r;
        cj["H"] = h_used;
        cj["measured_H"] = {{"combined", measured.combined}, {"per_component", measured.per_component},
                            {"pairs", measured.pairs}, {"exhaustive", measured.exhaustive}};
        cj["global_bound"] = cert.global_bound;
        cj["max_deviation_on_B"] = cert.max_deviation_on_B;
        cj["audit"] = {{"seed", cert.audit.seed}, {"pairs", cert.audit.pairs}, {"max_ratio", cert.audit.max_ratio},
                       {"pass", cert.audit.pass}};
        cj["idempotent"] = idempotent;
        cj["smallest_delta"] = f.smallest_delta;
        c.report["results"]["certificate"] = cj;
        const bool ok = f.monotone && cert.audit.pass && cert.max_deviation_on_B == 0.0 && idempotent;
        c.report["verdicts"]["lusin"] = ok;
        c.verdicts_pass = c.verdicts_pass && ok;
        c.files.push_back({"certificate.json", cj.dump(2) + "\n"});
        std::ostringstream field;
        bvq::write_field(field, cert.extension);
        c.files.push_back({"extension.bvqf", field.str()});
    };
}

Plan plan_export(Context& ctx, const FieldSetup& fs) {
    const auto enc_name = ctx.cfg.get_string("export.encoding", "binary");
    if (enc_name != "binary" && enc_name != "csv") throw ConfigError("config key 'export.encoding': expected binary or csv");
    const auto enc = enc_name == "csv" ? bvq::Encoding::csv : bvq::Encoding::binary_le;
    const std::string name = ctx.cfg.get_string("export.path", "field.bvqf");
    if (name.find('/') != std::string::npos) throw ConfigError("config key 'export.path': a file name inside --out");
    return [=](Context& c) {
        std::ostringstream os;
        bvq::write_field(os, fs.entry.field, enc);
        c.files.push_back({name, os.str()});
        c.report["results"]["export"] = {{"path", name}, {"encoding", enc_name}};
    };
}

Plan plan_import(Context&, const FieldSetup& fs) {
    return [=](Context& c) {
        const auto& u = fs.entry.field;
        c.report["results"]["import"] = {{"cells", u.domain().cell_count()},
                                         {"mean", bvq::domain_mean(u)},
                                         {"oscillation_scale", bvq::oscillation_scale(u)},
                                         {"masked_cells", u.masked_count()}};
    };
}

std::string gallery_table() {
    std::ostringstream os;
    for (const auto& info : bvq::catalog()) {
        os << info.name << "\n  formula:  " << info.formula << "\n  dims:    ";
        for (int d : info.dims) os << ' ' << d;
        os << "\n  params:  ";
        if (info.params.empty()) os << " (none)";
        for (const auto& p : info.params) os << ' ' << p.name << '=' << p.default_value;
        os << "\n  validity: " << info.validity << "\n  expected: ";
        for (std::size_t i = 0; i < info.expected.size(); ++i) os << (i ? "; " : "") << info.expected[i];
        os << "\n";
    }
    return os.str();
}

json gallery_json() {
    json arr = json::array();
    for (const auto& info : bvq::catalog()) {
        json params = json::array();
        for (const auto& p : info.params) params.push_back({{"name", p.name}, {"default", p.default_value}, {"meaning", p.meaning}});
        arr.push_back({{"name", info.name}, {"formula", info.formula}, {"dims", info.dims}, {"params", params},
                       {"validity", info.validity}, {"expected", info.expected}});
    }
    return arr;
}

void write_outputs(const std::filesystem::path& dir, const json& report, const Artifacts& files) {
    std::filesystem::create_directories(dir);
    for (const auto& [name, content] : files) {
        std::ofstream os(dir / name, std::ios::binary);
        os << content;
        if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
    }
    std::ofstream os(dir / "report.json");
    os << report.dump(2) << "\n";
    if (!os) throw std::runtime_error("cannot write " + (dir / "report.json").string());
}

}  // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> list = {"constants", "besov",        "oscillation", "jumps", "verify",
                                                  "lusin",     "gallery-list", "import",      "export"};
    return list;
}

int run(const std::string& command, const RunOptions& opts, std::ostream& out, std::ostream& err) {
    if (std::find(subcommands().begin(), subcommands().end(), command) == subcommands().end()) {
        err << "unknown subcommand '" << command << "'\n";
        return config_error;
    }
    if (opts.threads > 0) bvq::set_thread_count(opts.threads);
    Context ctx;
    ctx.opts = opts;
    try {
        if (opts.tolerance_profile != "default" && opts.tolerance_profile != "strict")
            throw ConfigError("--tolerance-profile: expected strict or default");
        if (command == "gallery-list") {
            out << gallery_table();
            if (!opts.out.empty()) {
                json r{{"tool", "bvqlab"}, {"version", kVersion}, {"command", command}, {"catalog", gallery_json()}};
                write_outputs(opts.out, r, {});
            }
            return ok;
        }
        if (opts.config.empty()) throw ConfigError("--config is required for '" + command + "'");
        ctx.cfg = Config::load(opts.config);
        ctx.cfg.require_known(kKeys, kPrefixes);
        if (ctx.cfg.get_int("schema", kSchema) != kSchema)
            throw ConfigError("config key 'schema': only schema " + std::to_string(kSchema) + " is supported");
        ctx.tolerance = ctx.cfg.get_double("tolerance", opts.tolerance_profile == "strict" ? 0.02 : 0.05);
        if (!(ctx.tolerance >= 0.0)) throw ConfigError("config key 'tolerance': must be non-negative");
        ctx.seed = opts.seed.value_or(static_cast<std::uint64_t>(ctx.cfg.get_int("seed", 20240601)));

        // Pre-flight: everything below may throw before any file is written.
        std::optional<FieldSetup> fs;
        if (command != "constants") {
            try {
                fs = load_field(ctx.cfg);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("field: ") + e.what());
            }
        }
        Plan plan;
        try {
            if (command == "constants") plan = plan_constants(ctx);
            else if (command == "besov") plan = plan_besov(ctx, *fs);
            else if (command == "oscillation") plan = plan_oscillation(ctx, *fs);
            else if (command == "jumps") plan = plan_jumps(ctx, *fs);
            else if (command == "verify") plan = plan_verify(ctx, *fs);
            else if (command == "lusin") plan = plan_lusin(ctx, *fs);
            else if (command == "export") plan = plan_export(ctx, *fs);
            else plan = plan_import(ctx, *fs);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }

        ctx.report["tool"] = "bvqlab";
        ctx.report["version"] = kVersion;
        ctx.report["schema"] = kSchema;
        ctx.report["command"] = command;
        json echo = json::object();
        for (const auto& [k, v] : ctx.cfg.entries()) echo[k] = v;
        ctx.report["config"] = echo;
        ctx.report["seed"] = ctx.seed;
        ctx.report["tolerance"] = ctx.tolerance;
        ctx.report["tolerance_profile"] = opts.tolerance_profile;
        if (fs) ctx.report["field"] = fs->description;
        ctx.report["results"] = json::object();
        ctx.report["verdicts"] = json::object();

        plan(ctx);

        ctx.report["all_verdicts_pass"] = ctx.verdicts_pass;
        // The only field that differs between identical runs.
        ctx.report["run"] = {{"timestamp", timestamp()}, {"threads", bvq::thread_count()}, {"stage_seconds", ctx.timings}};
        const auto dir = !opts.out.empty() ? opts.out : std::filesystem::path(ctx.cfg.get_string("output.dir", "."));
        write_outputs(dir, ctx.report, ctx.files);
        out << command << ": wrote " << (dir / "report.json").string() << "\n";
        if (!ctx.verdicts_pass) {
            err << command << ": verdict failure (see report.json verdicts)\n";
            return verdict_failure;
        }
        return ok;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const bvq::ResolutionError& e) {
        err << "guard violation: " << e.what() << "\n  remediation: use at least";
        for (int c : e.min_cells())
            if (c > 0) err << ' ' << c;
        err << " cells per axis or larger radii (spacing <= " << e.required_spacing() << ")\n";
        return guard_violation;
    } catch (const bvq::CostCapError& e) {
        err << "guard violation: " << e.what() << " (" << e.requested() << " > " << e.cap()
            << ")\n  remediation: coarsen the grid or restrict the domain\n";
        return guard_violation;
    } catch (const bvq::TargetNotReachedError& e) {
        err << "verdict failure: " << e.what() << " (best " << e.best_achieved() << ")\n";
        return verdict_failure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return runtime_failure;
    }
}

}  // namespace bvqlab
