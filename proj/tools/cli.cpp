#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "dbz/corpus.hpp"
#include "dbz/dbzcalc.hpp"
#include "dbz/geom.hpp"
#include "dbz/mapping.hpp"
#include "json.hpp"

namespace dbz::cli {

namespace {

using ojson = nlohmann::ordered_json;

std::string trim(std::string s) {
    auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

long parse_long(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        long v = std::stol(value, &used);
        if (used == value.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::InvalidArgument, key + " must be an integer, got '" + value + "'");
}

Output parse_output(const std::string& text) {
    if (text == "text") return Output::Text;
    if (text == "json") return Output::Json;
    throw Error(ErrorCode::InvalidArgument, "output must be text or json, got '" + text + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void check_config(const CliConfig& c) {
    if (c.precision < kMinPrecision)
        throw Error(ErrorCode::InvalidArgument, "precision must be at least " + std::to_string(kMinPrecision));
    if (c.order < 0) throw Error(ErrorCode::InvalidArgument, "order must be nonnegative");
}

struct Flags {
    std::string config_path;
    std::string mode;
    long precision = 0;
    long order = 0;
    std::string output;
    unsigned long seed = 0;
};

struct Context {
    CliConfig config;
    std::ostream& out;

    ExpandOptions expand_options() const { return {config.order, config.mode, config.precision}; }
    Bindings bindings(const std::string& params) const {
        return parse_bindings(params, config.mode, config.precision);
    }
    bool json() const { return config.output == Output::Json; }
};

// ---------------------------------------------------------------------------

struct PointArgs {
    std::string expr;
    std::string var = "x";
    std::string at = "0";
    std::string params;
};

int cmd_eval(const Context& ctx, const PointArgs& a) {
    Bindings b = ctx.bindings(a.params);
    Expr e = parse(a.expr);
    ExpansionPoint at = parse_point(a.at, b);
    Scalar v = dbz_value(e, a.var, at, b, ctx.expand_options());
    if (ctx.json()) {
        ojson j;
        j["expr"] = a.expr;
        j["var"] = a.var;
        j["at"] = at.str();
        j["value"] = v.str();
        ctx.out << j.dump() << "\n";
    } else {
        ctx.out << v.str() << "\n";
    }
    return kExitOk;
}

int cmd_expand(const Context& ctx, const PointArgs& a) {
    Bindings b = ctx.bindings(a.params);
    Expr e = parse(a.expr);
    ExpansionPoint at = parse_point(a.at, b);
    LaurentSeries s = expand_bound(e, a.var, at, b, ctx.expand_options());
    ctx.out << s.to_json() << "\n";
    return kExitOk;
}

int cmd_yamada(const Context& ctx, const std::string& expr, const std::string& params) {
    YamadaComplex v = yamada_eval(parse(expr), ctx.bindings(params), ctx.config.mode, ctx.config.precision);
    if (ctx.json()) {
        ojson j;
        j["expr"] = expr;
        j["value"] = v.str();
        ctx.out << j.dump() << "\n";
    } else {
        ctx.out << v.str() << "\n";
    }
    return kExitOk;
}

void print_point(const Context& ctx, const std::string& key, const std::string& value) {
    if (ctx.json()) {
        ojson j;
        j[key] = value;
        ctx.out << j.dump() << "\n";
    } else {
        ctx.out << value << "\n";
    }
}

int cmd_invert(const Context& ctx, const std::string& center, const std::string& radius, const std::string& point) {
    const Mode m = ctx.config.mode;
    const long p = ctx.config.precision;
    Circle c(parse_plane_point(center, m, p).z, Scalar::parse(radius, m, p));
    print_point(ctx, "point", invert(c, parse_plane_point(point, m, p)).str());
    return kExitOk;
}

int cmd_project(const Context& ctx, const std::string& to_sphere_arg, const std::string& to_plane_arg) {
    const Mode m = ctx.config.mode;
    const long p = ctx.config.precision;
    if (!to_sphere_arg.empty()) {
        print_point(ctx, "sphere", to_sphere(parse_plane_point(to_sphere_arg, m, p)).str());
    } else {
        print_point(ctx, "plane", to_plane(parse_sphere_point(to_plane_arg, m, p)).str());
    }
    return kExitOk;
}

Rational param_rational(const Bindings& b, const std::string& name, std::optional<Rational> fallback = {}) {
    auto it = b.find(name);
    if (it == b.end()) {
        if (fallback) return *fallback;
        throw Error(ErrorCode::InvalidArgument, "builtin map needs parameter " + name);
    }
    if (!it->second.is_exact() || !it->second.is_real())
        throw Error(ErrorCode::InvalidArgument, "parameter " + name + " must be a real rational");
    return it->second.exact().re;
}

Expr builtin_map(const std::string& name, const Bindings& b) {
    if (name == "disk") {
        ComplexRational c;
        if (auto it = b.find("c"); it != b.end()) {
            if (!it->second.is_exact()) throw Error(ErrorCode::InvalidArgument, "parameter c must be exact");
            c = it->second.exact();
        }
        return disk_exterior_map(c, param_rational(b, "R", Rational(1)));
    }
    if (name == "segment") return segment_exterior_map(param_rational(b, "a", Rational(2)));
    if (name == "ellipse") return ellipse_exterior_map(param_rational(b, "p"), param_rational(b, "q"));
    throw Error(ErrorCode::InvalidArgument, "unknown builtin map '" + name + "' (disk, segment, ellipse)");
}

int cmd_mapcenter(const Context& ctx, const std::string& expr, const std::string& var, const std::string& builtin,
                  const std::string& params) {
    Bindings b = ctx.bindings(params);
    std::string v = var;
    Expr e = builtin.empty() ? parse(expr) : builtin_map(builtin, b);
    if (!builtin.empty()) {
        v = "z";
        b.clear();
    }
    ExteriorMapSeries s = expand_at_infinity(e, v, b, ctx.expand_options());
    Scalar radius = mapping_radius(s);
    Scalar center = dbz_value_at_infinity(s);
    if (ctx.json()) {
        ojson j;
        j["radius"] = radius.str();
        j["center"] = center.str();
        ctx.out << j.dump() << "\n";
    } else {
        ctx.out << "radius " << radius.str() << "\n" << "center " << center.str() << "\n";
    }
    return kExitOk;
}

struct EstimateArgs {
    std::string expr;
    std::string var = "z";
    std::string csv;
    std::string rho = "1/2";
    long samples = 64;
    long n_lo = -1;
    long n_hi = 5;
    std::string params;
};

int cmd_estimate(const Context& ctx, const EstimateArgs& a) {
    const long prec = ctx.config.precision;
    Rational rho = Rational::parse(a.rho);
    std::vector<ContourSample> samples;
    if (!a.csv.empty()) {
        samples = read_samples_csv(read_file(a.csv), prec);
    } else {
        samples = sample_w_circle(parse(a.expr), a.var, rho, a.samples, prec, ctx.bindings(a.params));
    }
    auto coeffs = estimate_coeffs(samples, rho, a.n_lo, a.n_hi);
    if (ctx.json()) {
        ojson j;
        j["rho"] = rho.str();
        j["samples"] = samples.size();
        auto rows = ojson::array();
        for (long n = a.n_lo; n <= a.n_hi; ++n) {
            ojson r;
            r["w_exponent"] = n;
            r["value"] = coeffs[static_cast<std::size_t>(n - a.n_lo)].str();
            rows.push_back(r);
        }
        j["coeffs"] = rows;
        ctx.out << j.dump() << "\n";
    } else {
        for (long n = a.n_lo; n <= a.n_hi; ++n)
            ctx.out << "C" << -n << " " << coeffs[static_cast<std::size_t>(n - a.n_lo)].str() << "\n";
    }
    return kExitOk;
}

int cmd_corpus(const Context& ctx, const std::string& file) {
    std::vector<CorpusRow> rows = file.empty() ? builtin_corpus() : load_corpus(read_file(file));
    CorpusReport report = corpus_run(rows, ctx.expand_options());
    ctx.out << (ctx.json() ? report.to_json() : report.to_text());
    return report.all_passed() ? kExitOk : kExitCorpus;
}

}  // namespace

CliConfig apply_config_text(CliConfig base, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line.front() == '#' || line.front() == '[') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::InvalidArgument, "config line '" + line + "' is not key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (key == "mode") {
            base.mode = parse_mode(value);
        } else if (key == "precision") {
            base.precision = parse_long(key, value);
        } else if (key == "order") {
            base.order = parse_long(key, value);
        } else if (key == "output") {
            base.output = parse_output(value);
        } else if (key == "seed") {
            base.seed = static_cast<unsigned long>(parse_long(key, value));
        } else {
            throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
        }
    }
    return base;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Division-by-zero calculus: values of functions at their singular points"};
    app.name(args.empty() ? "dbz" : args[0]);
    app.require_subcommand(1);
    app.fallthrough();

    Flags flags;
    app.add_option("--config", flags.config_path, "key=value config file (also $DBZ_CONFIG)");
    app.add_option("--mode", flags.mode, "exact or float (also $DBZ_MODE)");
    app.add_option("--precision", flags.precision, "float precision in bits");
    app.add_option("--order", flags.order, "truncation order");
    app.add_option("--output", flags.output, "text or json");
    app.add_option("--seed", flags.seed, "seed for randomized commands");

    PointArgs point;
    auto add_point = [&](CLI::App* sub) {
        sub->add_option("expr", point.expr, "expression")->required();
        sub->add_option("--var", point.var, "expansion variable");
        sub->add_option("--at", point.at, "anchor: q, q/p, r*pi, q+r*pi or x+yi");
        sub->add_option("--params", point.params, "bindings such as a=1/2,b=3");
    };
    auto* eval = app.add_subcommand("eval", "division-by-zero value f(a) = C0");
    add_point(eval);
    auto* expand_cmd = app.add_subcommand("expand", "Laurent expansion as JSON");
    add_point(expand_cmd);

    std::string yamada_expr, yamada_params;
    auto* yamada = app.add_subcommand("yamada", "evaluate with z/0 = 0");
    yamada->add_option("expr", yamada_expr, "expression")->required();
    yamada->add_option("--params", yamada_params, "bindings");

    std::string inv_center = "0,0", inv_radius = "1", inv_point;
    auto* inv = app.add_subcommand("invert", "inversion in a circle");
    inv->add_option("point", inv_point, "x,y")->required();
    inv->add_option("--center", inv_center, "circle centre x,y");
    inv->add_option("--radius", inv_radius, "circle radius");

    std::string to_sphere_arg, to_plane_arg;
    auto* project = app.add_subcommand("project", "stereographic projection");
    auto* ts = project->add_option("--to-sphere", to_sphere_arg, "plane point x,y");
    auto* tp = project->add_option("--to-plane", to_plane_arg, "sphere point xi,eta,zeta");
    ts->excludes(tp);
    project->require_option(1);

    std::string map_expr, map_var = "z", map_builtin, map_params;
    auto* mapc = app.add_subcommand("mapcenter", "mapping radius and centre of an exterior map");
    auto* map_expr_opt = mapc->add_option("expr", map_expr, "map f(z)");
    mapc->add_option("--var", map_var, "map variable");
    auto* builtin_opt = mapc->add_option("--builtin", map_builtin, "disk, segment or ellipse");
    mapc->add_option("--params", map_params, "bindings (disk: c,R; segment: a; ellipse: p,q)");
    map_expr_opt->excludes(builtin_opt);

    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "Laurent coefficients at infinity by contour sampling");
    auto* est_expr = estimate->add_option("expr", est.expr, "map f(z)");
    estimate->add_option("--var", est.var, "map variable");
    auto* est_csv = estimate->add_option("--csv", est.csv, "samples as theta,re,im rows on |w| = rho");
    estimate->add_option("--rho", est.rho, "sampling radius in w = 1/z");
    estimate->add_option("--samples", est.samples, "number of samples");
    estimate->add_option("--n-lo", est.n_lo, "lowest w exponent");
    estimate->add_option("--n-hi", est.n_hi, "highest w exponent");
    estimate->add_option("--params", est.params, "bindings");
    est_expr->excludes(est_csv);

    std::string corpus_file;
    auto* corpus = app.add_subcommand("corpus", "run the worked-example table");
    corpus->add_option("--file", corpus_file, "corpus JSON (default: built in)");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }

    CliConfig config;
    try {
        std::string config_path = flags.config_path;
        if (config_path.empty()) {
            if (const char* env = std::getenv("DBZ_CONFIG")) config_path = env;
        }
        if (!config_path.empty()) config = apply_config_text(config, read_file(config_path));
        if (const char* env = std::getenv("DBZ_MODE"); env && *env) config.mode = parse_mode(env);
        if (app.count("--mode")) config.mode = parse_mode(flags.mode);
        if (app.count("--precision")) config.precision = flags.precision;
        if (app.count("--order")) config.order = flags.order;
        if (app.count("--output")) config.output = parse_output(flags.output);
        if (app.count("--seed")) config.seed = flags.seed;
        check_config(config);
        if (*mapc && map_expr.empty() && map_builtin.empty())
            throw Error(ErrorCode::InvalidArgument, "mapcenter needs an expression or --builtin");
        if (*estimate && est.expr.empty() && est.csv.empty())
            throw Error(ErrorCode::InvalidArgument, "estimate needs an expression or --csv");
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    Context ctx{config, out};
    try {
        if (*eval) return cmd_eval(ctx, point);
        if (*expand_cmd) return cmd_expand(ctx, point);
        if (*yamada) return cmd_yamada(ctx, yamada_expr, yamada_params);
        if (*inv) return cmd_invert(ctx, inv_center, inv_radius, inv_point);
        if (*project) return cmd_project(ctx, to_sphere_arg, to_plane_arg);
        if (*mapc) return cmd_mapcenter(ctx, map_expr, map_var, map_builtin, map_params);
        if (*estimate) return cmd_estimate(ctx, est);
        if (*corpus) return cmd_corpus(ctx, corpus_file);
    } catch (const SyntaxError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::InvalidArgument ? kExitUsage : kExitEval;
    }
    return kExitUsage;
}

}  // namespace dbz::cli
