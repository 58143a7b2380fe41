#include "weyldyn/cli.hpp"

#include "weyldyn/bounds.hpp"
#include "weyldyn/config.hpp"
#include "weyldyn/errors.hpp"
#include "weyldyn/io.hpp"
#include "weyldyn/oracle.hpp"
#include "weyldyn/spectral.hpp"
#include "weyldyn/validation.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace weyldyn {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Flags {
    std::string config;
    std::string out = ".";
    bool force = false;
    int threads = 0;
    std::optional<double> tol;
};

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InvalidArgument("cannot write '" + path.string() + "'");
    out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

template <class Fn>
void write_stream(const fs::path& path, Fn&& fn)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InvalidArgument("cannot write '" + path.string() + "'");
    fn(out);
}

json complex_json(complex z) { return json::array({z.real(), z.imag()}); }

json potential_json(const Potential& p)
{
    return {{"kind", std::string(to_string(p.kind()))},
            {"params", p.params()},
            {"x_max", std::isfinite(p.x_max()) ? json(p.x_max()) : json("inf")}};
}

json region_json(const PotentialNorms& norms)
{
    const Region r = convergence_region(norms);
    auto finite = [](double v) { return std::isfinite(v) ? json(v) : json("inf"); };
    return {{"l1", norms.l1 ? json(*norms.l1) : json("inf")},
            {"windowed", norms.windowed},
            {"windowed_scaled", norms.windowed_scaled},
            {"l1_threshold", finite(r.l1_threshold)},
            {"window_threshold", r.window_threshold},
            {"effective_threshold", finite(r.effective())},
            {"kappa_star", r.kappa_star},
            {"tail_rate", r.tail_rate},
            {"threshold_discrepancy", r.threshold_discrepancy}};
}

json manifest(const std::string& command, const Config& config, const json& thresholds,
              bool discrepancy)
{
    return {{"tool", "weyldyn"},
            {"version", kVersion},
            {"command", command},
            {"config_hash", config.hash_hex()},
            {"modules",
             {{"potential", kVersion}, {"kernel", kVersion}, {"wave", kVersion}, {"spectral", kVersion},
              {"oracle", kVersion}, {"bounds", kVersion}, {"cli", kVersion}}},
            {"thresholds", thresholds},
            {"threshold_discrepancy", discrepancy},
            {"threads", omp_get_max_threads()}};
}

NeumannOptions neumann_options(const Config& config, const Flags& flags)
{
    NeumannOptions opts;
    opts.tol = flags.tol.value_or(config.get_double("kernel", "tol", opts.tol));
    opts.max_terms = config.get_int("kernel", "max_terms", opts.max_terms);
    return opts;
}

TriangleGrid grid_from(const Config& config)
{
    if (!config.has("kernel", "eta_max") || !config.has("kernel", "h"))
        throw InvalidArgument("[kernel] needs eta_max and h");
    return TriangleGrid::make(config.get_double("kernel", "eta_max", 0.0), config.get_double("kernel", "h", 0.0));
}

int cmd_kernel(const Config& config, const Flags& flags)
{
    const Potential p = potential_from_config(config);
    const TriangleGrid grid = grid_from(config);
    const PotentialNorms norms = compute_norms(p);
    NeumannOptions opts = neumann_options(config, flags);

    BoundReport terms;
    terms.check = "term_bound";
    opts.on_term = [&](int n, const KernelField& term) { terms.merge(check_term(n, term, norms.windowed_scaled)); };
    const KernelField field = neumann_solve(p, grid, opts);

    json checks = json::array();
    checks.push_back(check_gursa(p, field));
    if (norms.l1_finite())
        checks.push_back(check_w_l1(norms, field));
    for (double kappa : {1.0, std::sqrt(2.0), 2.0})
        checks.push_back(check_w_window(norms, field, kappa));
    checks.push_back(terms);

    json report = {{"command", "kernel"},
                   {"potential", potential_json(p)},
                   {"eta_max", grid.eta_max},
                   {"h", grid.h},
                   {"tol", opts.tol},
                   {"terms_used", field.terms_used},
                   {"last_term_max", field.last_term_max},
                   {"bound_check", checks}};

    if (config.get_bool("kernel", "richardson", false)) {
        NeumannOptions plain = opts;
        plain.on_term = nullptr;
        const KernelField half = neumann_solve(p, TriangleGrid::make(grid.eta_max, 0.5 * grid.h), plain);
        const KernelField quarter = neumann_solve(p, TriangleGrid::make(grid.eta_max, 0.25 * grid.h), plain);
        report["richardson"] = {{"steps", {grid.h, 0.5 * grid.h, 0.25 * grid.h}},
                                {"order", richardson_order(field, half, quarter)}};
    }

    const fs::path out(flags.out);
    write_stream(out / "kernel.csv", [&](std::ostream& s) { write_kernel_csv(s, field); });
    write_json(out / "report.json", report);
    write_json(out / "manifest.json",
               manifest("kernel", config, region_json(norms), convergence_region(norms).threshold_discrepancy));
    std::cout << "kernel: " << field.terms_used << " terms, last term " << field.last_term_max << "\n";
    return exit_ok;
}

double max_pairwise(const std::vector<MValue>& values)
{
    double worst = 0.0;
    for (std::size_t a = 0; a < values.size(); ++a)
        for (std::size_t b = a + 1; b < values.size(); ++b)
            worst = std::max(worst, std::abs(values[a].m - values[b].m) / std::max(1.0, std::abs(values[b].m)));
    return worst;
}

int cmd_weyl(const Config& config, const Flags& flags)
{
    const Potential p = potential_from_config(config);
    const TriangleGrid grid = grid_from(config);
    const PotentialNorms norms = compute_norms(p);
    const Region region = convergence_region(norms);
    const double threshold = region.effective();

    const std::vector<complex> ks = config.get_complexes("spectral", "k");
    const std::vector<double> kappas = config.get_doubles("spectral", "kappa");
    if (ks.empty() && kappas.empty())
        throw InvalidArgument("[spectral] needs k and/or kappa lists");
    for (complex k : ks)
        if (!(k.imag() > 0.0))
            throw InvalidArgument("[spectral] k values need Im k > 0");
    for (double kappa : kappas)
        if (!(kappa > 0.0))
            throw InvalidArgument("[spectral] kappa values must be > 0");

    const double x_end = config.get_double("spectral", "x_end", 4.0);
    const double x_step = config.get_double("spectral", "x_step", 0.1);
    if (!(x_end >= 0.0) || !(x_step > 0.0))
        throw InvalidArgument("[spectral] needs x_end >= 0 and x_step > 0");
    const double T = config.get_double("spectral", "T", grid.eta_max - std::max(x_end, 2.0 * grid.h));
    if (!(T > 0.0) || T + std::max(x_end, 2.0 * grid.h) > grid.eta_max * (1.0 + 1e-12))
        throw InvalidArgument("[spectral] T + max(x_end, 2h) must not exceed eta_max");
    const double steps = T / grid.h;
    if (std::abs(steps - std::round(steps)) > 1e-9 * steps)
        throw InvalidArgument("[spectral] T must be a multiple of the kernel step");

    SpectralOptions sopts;
    sopts.force = flags.force;
    sopts.tail_tol = config.get_double("spectral", "tail_tol", sopts.tail_tol);

    // region check before any work
    for (complex k : ks)
        if (!(k.imag() > threshold) && !flags.force)
            throw RegionError("k = " + format_double(k.real()) + "+" + format_double(k.imag()) +
                              "i lies outside the convergence region (Im k must exceed " +
                              format_double(threshold) + "); use --force to evaluate anyway");
    for (double kappa : kappas)
        if (!(kappa > threshold) && !flags.force)
            throw RegionError("kappa = " + format_double(kappa) +
                              " lies outside the convergence region (threshold " + format_double(threshold) +
                              "); use --force to evaluate anyway");

    const bool use_oracle = config.get_bool("spectral", "oracle", true);
    const double X_start = config.get_double("spectral", "ode_x_start", p.compact() ? std::max(1.0, p.x_max()) : 40.0);

    const KernelField field = neumann_solve(p, grid, neumann_options(config, flags));

    std::vector<double> xs;
    for (std::size_t i = 0;; ++i) {
        const double x = x_step * static_cast<double>(i);
        if (x > x_end * (1.0 + 1e-12))
            break;
        xs.push_back(x);
    }

    std::vector<WeylSample> samples;
    std::vector<MValue> rows;
    json points = json::array();
    double overall = 0.0;
    auto record = [&](complex k, const std::vector<MValue>& values) {
        json routes = json::object();
        for (const MValue& v : values)
            routes[std::string(to_string(v.route))] = complex_json(v.m);
        const double d = max_pairwise(values);
        overall = std::max(overall, d);
        points.push_back({{"k", complex_json(k)},
                          {"z", complex_json(z_from_k(k))},
                          {"inside_region", values.front().inside_region},
                          {"tail_bound", std::isfinite(values.front().tail_bound) ? json(values.front().tail_bound) : json("inf")},
                          {"routes", routes},
                          {"max_pairwise_disagreement", d}});
        rows.insert(rows.end(), values.begin(), values.end());
    };

    for (complex k : ks) {
        WeylSample s = weyl_solution(field, norms, k, xs, T, sopts);
        std::vector<MValue> values{m_from_weyl(s)};
        if (use_oracle) {
            MValue o = ode_weyl_oracle(p, k, X_start).m;
            o.inside_region = s.inside_region;
            values.push_back(o);
        }
        samples.push_back(std::move(s));
        record(k, values);
    }
    if (!kappas.empty()) {
        const ResponseFunction r = response_function(field, T, grid.h);
        const AmplitudeFunction A = a_amplitude(r);
        for (double kappa : kappas) {
            const complex k = k_from_kappa(kappa);
            WeylSample s = weyl_solution(field, norms, k, xs, T, sopts);
            std::vector<MValue> values{m_from_weyl(s), m_from_response(r, norms, kappa, sopts),
                                       m_from_amplitude(A, norms, kappa, sopts)};
            if (use_oracle) {
                MValue o = ode_weyl_oracle(p, k, X_start).m;
                o.inside_region = s.inside_region;
                values.push_back(o);
            }
            samples.push_back(std::move(s));
            record(k, values);
        }
    }

    json report = {{"command", "weyl"},
                   {"potential", potential_json(p)},
                   {"eta_max", grid.eta_max},
                   {"h", grid.h},
                   {"T", T},
                   {"terms_used", field.terms_used},
                   {"points", points},
                   {"max_pairwise_disagreement", overall}};

    const fs::path out(flags.out);
    write_stream(out / "weyl.csv", [&](std::ostream& s) { write_weyl_csv(s, samples); });
    write_stream(out / "mfunc.csv", [&](std::ostream& s) { write_mfunc_csv(s, rows); });
    write_json(out / "report.json", report);
    write_json(out / "manifest.json", manifest("weyl", config, region_json(norms), region.threshold_discrepancy));
    std::cout << "weyl: " << rows.size() << " m values, max route disagreement " << overall << "\n";
    return exit_ok;
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int cmd_validate(const Config& config, const Flags& flags)
{
    ValidationConfig vcfg = ValidationConfig::from_config(config);
    if (flags.tol)
        vcfg.neumann_tol = *flags.tol;
    const ValidationReport result = run_acceptance(vcfg);

    json report = result.to_json();
    report["command"] = "validate";
    report["config_hash"] = config.hash_hex();
    report["h"] = vcfg.h;
    report["timestamp"] = utc_timestamp();

    json thresholds = json::object();
    bool discrepancy = false;
    for (const auto& [name, p] : acceptance_catalog()) {
        const PotentialNorms norms = compute_norms(p);
        thresholds[name] = region_json(norms);
        discrepancy = discrepancy || convergence_region(norms).threshold_discrepancy;
    }

    const fs::path out(flags.out);
    write_json(out / "report.json", report);
    write_json(out / "manifest.json", manifest("validate", config, thresholds, discrepancy));
    for (const CriterionResult& c : result.criteria)
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.id << " " << c.name
                  << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
    return result.all_passed() ? exit_ok : exit_acceptance;
}

int apply_threads(int requested)
{
    int threads = requested;
    if (threads == 0)
        if (const char* env = std::getenv("WEYLDYN_THREADS")) {
            try {
                threads = std::stoi(env);
            } catch (const std::exception&) {
                throw InvalidArgument(std::string("WEYLDYN_THREADS is not an integer: '") + env + "'");
            }
        }
    if (threads < 0)
        throw InvalidArgument("thread count must be >= 1");
    if (threads > 0)
        omp_set_num_threads(threads);
    return threads;
}

} // namespace

int run_cli(int argc, char** argv)
{
    CLI::App app{"Goursat-kernel construction of Weyl solutions and m-functions"};
    app.require_subcommand(1);
    Flags flags;
    auto add_common = [&](CLI::App* cmd, bool config_required) {
        auto* opt = cmd->add_option("--config", flags.config, "scenario file");
        if (config_required)
            opt->required();
        cmd->add_option("--out", flags.out, "output directory");
        cmd->add_flag("--force", flags.force, "evaluate below the convergence threshold");
        cmd->add_option("--threads", flags.threads, "OpenMP threads (fallback: WEYLDYN_THREADS)");
        cmd->add_option("--tol", flags.tol, "Neumann series tolerance");
    };
    CLI::App* kernel = app.add_subcommand("kernel", "solve the Goursat kernel and check its bounds");
    CLI::App* weyl = app.add_subcommand("weyl", "Weyl solutions and m-function by every route");
    CLI::App* validate = app.add_subcommand("validate", "run the acceptance suite");
    add_common(kernel, true);
    add_common(weyl, true);
    add_common(validate, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    try {
        apply_threads(flags.threads);
        const Config config = flags.config.empty() ? Config{} : Config::load(flags.config);
        fs::create_directories(flags.out);
        if (kernel->parsed())
            return cmd_kernel(config, flags);
        if (weyl->parsed())
            return cmd_weyl(config, flags);
        return cmd_validate(config, flags);
    } catch (const NoConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_no_convergence;
    } catch (const RegionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_region;
    } catch (const TruncationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_region;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    }
}

int run_cli(const std::vector<std::string>& args)
{
    std::vector<std::string> copy = args;
    std::vector<char*> argv;
    for (std::string& a : copy)
        argv.push_back(a.data());
    argv.push_back(nullptr);
    return run_cli(static_cast<int>(copy.size()), argv.data());
}

} // namespace weyldyn
