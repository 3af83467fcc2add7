// SPDX-License-Identifier: Apache-2.0
#include "momlat/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "momlat/estimators.hpp"
#include "momlat/parallel.hpp"
#include "momlat/reference_walks.hpp"
#include "momlat/spectral.hpp"

#ifndef MOMLAT_VERSION
#define MOMLAT_VERSION "0.0.0"
#endif

namespace momlat::cli
{
using nlohmann::json;

std::string tool_version()
{
    return MOMLAT_VERSION;
}

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace
{
struct UsageError : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(std::string const& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        double v = 0;
        auto const* first = item.data();
        auto const* last = item.data() + item.size();
        while (first < last && *first == ' ')
            ++first;
        auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc() || res.ptr != last)
            throw UsageError("cannot parse number '" + item + "'");
        out.push_back(v);
    }
    if (out.empty())
        throw UsageError("empty number list");
    return out;
}

void write_text(std::string const& path, std::string const& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open '" + path + "' for writing");
    f << text;
    f.close();
    if (!f)
        throw IoError("failed writing '" + path + "'");
}

std::string read_text(std::string const& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}
}  // namespace

//---------------------------------------------------------------------------//
json to_json(ExperimentConfig const& c)
{
    return json{{"command", c.command},
                {"model", c.model},
                {"dim", c.dim},
                {"eps", c.eps},
                {"p", c.p},
                {"tmax", c.tmax},
                {"reps", c.reps},
                {"seed", c.seed},
                {"time_mode", c.time_mode},
                {"quantity", c.quantity},
                {"lambdas", c.lambdas},
                {"bound_mode", c.bound_mode},
                {"points", c.points},
                {"suite", c.suite},
                {"strict_stated", c.strict_stated},
                {"out", c.out},
                {"report", c.report}};
}

ExperimentConfig config_from_json(json const& j)
{
    if (!j.is_object())
        throw std::invalid_argument("config must be a JSON object");
    ExperimentConfig c;
    auto const known = to_json(c);
    for (auto const& [key, value] : j.items())
    {
        if (!known.contains(key))
            throw std::invalid_argument("unknown config key '" + key + "'");
    }
    try
    {
        auto get = [&](char const* key, auto& field) {
            if (j.contains(key))
                j.at(key).get_to(field);
        };
        get("command", c.command);
        get("model", c.model);
        get("dim", c.dim);
        get("eps", c.eps);
        get("p", c.p);
        get("tmax", c.tmax);
        get("reps", c.reps);
        get("seed", c.seed);
        get("time_mode", c.time_mode);
        get("quantity", c.quantity);
        get("lambdas", c.lambdas);
        get("bound_mode", c.bound_mode);
        get("points", c.points);
        get("suite", c.suite);
        get("strict_stated", c.strict_stated);
        get("out", c.out);
        get("report", c.report);
    }
    catch (json::exception const& e)
    {
        throw std::invalid_argument(std::string("bad config value: ") + e.what());
    }
    return c;
}

SimConfig to_sim_config(ExperimentConfig const& c)
{
    if (c.model.empty())
        throw std::invalid_argument("--model is required");
    SimConfig s;
    s.dim = c.dim;
    if (c.dim < 1 || c.dim > kMaxDim)
        throw std::invalid_argument("--dim must be in [1, 4]");
    s.model = ModelKind(parse_model(c.model), c.eps);
    s.measure = c.p.empty() ? MeasureP::isotropic(c.dim) : MeasureP(c.p);
    s.base_seed = c.seed;
    if (c.time_mode == "continuous")
        s.time_mode = TimeMode::continuous;
    else if (c.time_mode == "jumpchain")
        s.time_mode = TimeMode::jump_chain;
    else
        throw std::invalid_argument("--time-mode must be continuous or jumpchain");
    s.validate();
    return s;
}

//---------------------------------------------------------------------------//
int cmd_simulate(ExperimentConfig const& c, unsigned threads,
                 std::ostream& out, std::ostream& err)
{
    SimConfig config;
    try
    {
        config = to_sim_config(c);
        if (!(c.tmax >= 1))
            throw std::invalid_argument("--tmax must be at least 1");
        if (c.reps < 2)
            throw std::invalid_argument("--reps must be at least 2");
    }
    catch (std::invalid_argument const& e)
    {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::vector<double> times{0.0};
    auto const grid = geometric_grid(c.tmax);
    times.insert(times.end(), grid.begin(), grid.end());
    auto series = msd_ensemble(config, times, c.reps, threads);

    std::string csv = "t,msd,stderr,n_reps\n";
    for (std::size_t i = 0; i < series.times.size(); ++i)
    {
        csv += format_double(series.times[i]) + ',' + format_double(series.msd[i])
               + ',' + format_double(series.stderr[i]) + ','
               + std::to_string(series.n_reps) + '\n';
    }
    if (c.out.empty())
    {
        out << csv;
        return kExitOk;
    }
    json meta{{"experiment", "simulate"},
              {"fingerprint", series.fingerprint},
              {"version", tool_version()},
              {"columns", {"t", "msd", "stderr", "n_reps"}},
              {"config", to_json(c)}};
    write_text(c.out, csv);
    write_text(c.out + ".meta.json", meta.dump(2) + "\n");
    return kExitOk;
}

//---------------------------------------------------------------------------//
namespace
{
// Value and its scale-free ratio for one lambda.
std::pair<double, double> spectral_value(ExperimentConfig const& c, double lambda)
{
    int const d = c.dim;
    double const log_inv = std::log(1 / lambda);
    auto need_eps = [&] {
        if (!(c.eps > 0))
            throw UsageError("--eps > 0 is required for this quantity");
    };
    if (c.quantity == "I")
    {
        QuadratureSpec q;
        q.points_per_axis = c.points;
        double const v = integral_I(lambda, d, q);
        double const r = d == 1 ? v * std::sqrt(2 * lambda)
                         : d == 2 ? v / log_inv
                                  : v;
        return {v, r};
    }
    if (c.quantity == "phihat")
    {
        double const v = phi_hat_U(lambda, d, PhiKind::phi);
        return {v, v * lambda};
    }
    if (c.quantity == "upper")
    {
        need_eps();
        double const v = msd_upper_bound(lambda, d, c.eps);
        double const r = d == 1   ? v * std::pow(lambda, 2.5)
                         : d == 2 ? v * lambda * lambda / log_inv
                                  : v * lambda * lambda;
        return {v, r};
    }
    if (c.quantity == "lower")
    {
        need_eps();
        double const v = variational_lower_bound(lambda, d, c.eps, c.points).value;
        double const r = d == 1 ? v * std::pow(lambda, 2.25)
                                : v * lambda * lambda / std::sqrt(log_inv);
        return {v, r};
    }
    if (c.quantity == "boundint")
    {
        BoundMode mode;
        if (c.bound_mode == "aniso")
            mode = BoundMode::aniso;
        else if (c.bound_mode == "iso")
            mode = BoundMode::iso_obstruction;
        else
            throw UsageError("--mode must be aniso or iso");
        double const v = bound_integral(lambda, d, mode);
        double const r = d == 1                       ? v * std::pow(lambda, 0.25)
                         : mode == BoundMode::aniso ? v / std::sqrt(log_inv)
                                                    : v;
        return {v, r};
    }
    throw UsageError("--quantity must be one of I, phihat, upper, lower, boundint");
}
}  // namespace

int cmd_spectral(ExperimentConfig const& c, std::ostream& out, std::ostream& err)
{
    std::string csv = "lambda,value,ratio\n";
    try
    {
        if (c.lambdas.empty())
            throw UsageError("--lambda is required");
        for (double lambda : c.lambdas)
        {
            if (!(lambda > 0))
                throw UsageError("lambda must be positive");
            auto [v, r] = spectral_value(c, lambda);
            csv += format_double(lambda) + ',' + format_double(v) + ','
                   + format_double(r) + '\n';
        }
    }
    catch (std::invalid_argument const& e)
    {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    if (c.out.empty())
        out << csv;
    else
        write_text(c.out, csv);
    return kExitOk;
}

//---------------------------------------------------------------------------//
namespace
{
VerifyRow sigma_row(std::string suite, std::string name, Estimate value,
                    Estimate reference, std::string kind = "derived")
{
    VerifyRow row;
    row.suite = std::move(suite);
    row.name = std::move(name);
    row.value = value.value;
    row.reference = reference.value;
    row.sigma = sigma_distance(value, reference);
    row.pass = row.sigma <= 3;
    row.kind = std::move(kind);
    return row;
}

std::string t_label(double t)
{
    return "t=" + format_double(t);
}

void suite_coupling(std::vector<VerifyRow>& rows, std::uint64_t reps,
                    std::uint64_t seed, unsigned threads)
{
    double const times[] = {0, 1, 2, 5, 10};
    std::vector<std::pair<std::string, MeasureP>> cases{
        {"d=1", MeasureP::isotropic(1)},
        {"d=2 iso", MeasureP::isotropic(2)},
        {"d=2 p=(1,0)", MeasureP({1, 0})}};
    std::vector<CouplingReport> reports;
    for (auto const& [label, measure] : cases)
    {
        auto rep = coupling_check_phi(measure, times, reps, seed, threads);
        double const p1 = measure.weight(0);
        int const d = measure.dimension();
        for (auto const& r : rep.rows)
        {
            std::string const at = label + " " + t_label(r.t);
            Estimate const sticky_d{r.sticky.value / d, r.sticky.stderr / d};
            rows.push_back(sigma_row("coupling", at + " phi = P/d", r.phi,
                                     sticky_d, "stated"));
            rows.push_back(sigma_row("coupling", at + " phi = 2 phi~",
                                     r.phi_minus_twice_tilde, Estimate{},
                                     "stated"));
            Estimate const coupled{0.5 * p1 * (r.sticky.value + std::exp(-r.t)),
                                   0.5 * p1 * r.sticky.stderr};
            rows.push_back(sigma_row("coupling",
                                     at + " phi = (p1/2)(P + exp(-t))", r.phi,
                                     coupled));
            Estimate const tilde{0.5 * p1 * r.sticky.value,
                                 0.5 * p1 * r.sticky.stderr};
            rows.push_back(sigma_row("coupling", at + " phi~ = (p1/2) P",
                                     r.phi_tilde, tilde));
        }
        reports.push_back(std::move(rep));
    }
    // p-dependence of phi in d = 2, reported only.
    for (std::size_t k = 0; k < reports[1].rows.size(); ++k)
    {
        auto row = sigma_row("coupling",
                             "d=2 " + t_label(reports[1].rows[k].t)
                                 + " phi(p=(1,0)) vs phi(iso)",
                             reports[2].rows[k].phi, reports[1].rows[k].phi,
                             "info");
        row.detail = "p-dependence, reported not asserted";
        rows.push_back(row);
    }
}

void suite_correlation(std::vector<VerifyRow>& rows, std::uint64_t reps,
                       std::uint64_t seed, unsigned threads)
{
    auto const measure = MeasureP::isotropic(1);
    std::pair<int, int> const pairs[] = {{1, 1}, {1, 2}, {1, -1}};
    for (auto [x, y] : pairs)
    {
        for (double t : {1.0, 2.0, 5.0})
        {
            Site const sx = make_site({x});
            Site const sy = make_site({y});
            auto direct = correlation_direct(t, sx, sy, measure,
                                             CorrelationMode::coupled, reps,
                                             seed, threads);
            auto pub = correlation_defect(t, sx, sy, 1, reps, seed, threads,
                                          CorrelationNorm::stated);
            auto cpl = correlation_defect(t, sx, sy, 1, reps, seed, threads,
                                          CorrelationNorm::coupling);
            std::string const at = "x=" + std::to_string(x) + " y="
                                   + std::to_string(y) + " " + t_label(t);
            rows.push_back(sigma_row("correlation", at + " C = (K + K)/4",
                                     direct, pub.value, "stated"));
            rows.push_back(sigma_row("correlation", at + " C = 2 p1^2 (K + K)",
                                     direct, cpl.value));
        }
    }
    auto a = correlation_direct(1, make_site({1}), make_site({2}), measure,
                                CorrelationMode::stationary, reps, seed + 1,
                                threads);
    auto b = correlation_direct(1, make_site({1}), make_site({2}), measure,
                                CorrelationMode::coupled, reps, seed + 2,
                                threads);
    rows.push_back(sigma_row("correlation",
                             "x=1 y=2 t=1 stationary vs coupled estimator", a, b));
}

void suite_yaglom(std::vector<VerifyRow>& rows, std::uint64_t reps,
                  std::uint64_t seed, unsigned threads)
{
    double const times[] = {1, 5, 10};
    struct Case
    {
        Model model;
        double eps;
        int dim;
        std::vector<double> p;
    };
    Case const cases[] = {{Model::m1_eps, 1, 1, {1}},   {Model::m2_eps, 1, 1, {1}},
                          {Model::m1_eps, 1, 2, {1, 0}}, {Model::m2_eps, 1, 2, {1, 0}},
                          {Model::m1, 0, 2, {0.5, 0.5}}, {Model::m2, 0, 1, {1}}};
    for (auto const& cs : cases)
    {
        SimConfig config;
        config.dim = cs.dim;
        config.model = ModelKind(cs.model, cs.eps);
        config.measure = MeasureP(cs.p);
        config.base_seed = seed;
        auto series = yaglom_decompose(config, times, reps, threads);
        std::string const label = to_string(cs.model) + " d="
                                  + std::to_string(cs.dim);
        // The cross term vanishes only when the backward compensator equals
        // the forward one, which is the M2 family; for M1 time reversal
        // turns the hand into the site arrow.
        bool const m2 = config.model.m2_family();
        bool const unit_rate = config.model.total_rate() == 1;
        for (std::size_t k = 0; k < series.times.size(); ++k)
        {
            std::string const at = label + " " + t_label(series.times[k]);
            rows.push_back(sigma_row("yaglom", at + " E - t = sum Lambda",
                                     series.difference[k], Estimate{},
                                     m2 && unit_rate ? "derived" : "stated"));
            rows.push_back(sigma_row("yaglom",
                                     at + " E - (jump rate) t = sum Lambda",
                                     series.difference_rate[k], Estimate{},
                                     m2 ? "derived" : "stated"));
        }
    }
}

void suite_tsaw(std::vector<VerifyRow>& rows, std::uint64_t seed)
{
    auto rep = tsaw_check(1000000, seed);
    VerifyRow row;
    row.suite = "tsaw";
    row.name = "grad l = -gamma for 10^6 steps";
    row.value = static_cast<double>(rep.steps);
    row.reference = 1e6;
    row.pass = rep.pass;
    row.detail = "forced right " + std::to_string(rep.forced_right) + ", forced left "
                 + std::to_string(rep.forced_left) + ", coin "
                 + std::to_string(rep.coin_steps) + ", gamma=0 visits "
                 + std::to_string(rep.zero_gamma_visits);
    if (!rep.pass)
        row.detail += "; " + rep.failure + " at step "
                      + std::to_string(rep.first_failure.value_or(0));
    rows.push_back(row);
}

void suite_ballistic(std::vector<VerifyRow>& rows, std::uint64_t seed)
{
    auto rep = m1_ballistic_check(10000, 100, seed);
    VerifyRow row;
    row.suite = "ballistic";
    row.name = "|Y_n| >= floor((n-2)/3), n=10^4, 100 seeds";
    row.value = static_cast<double>(rep.min_final_displacement);
    row.reference = static_cast<double>(rep.bound);
    row.pass = rep.pass;
    row.detail = "realign after 1: " + std::to_string(rep.realign_one)
                 + ", after 3: " + std::to_string(rep.realign_three)
                 + ", entry <= " + std::to_string(rep.max_entry_steps);
    if (!rep.pass)
        row.detail += "; " + rep.failure;
    rows.push_back(row);
}

void suite_stationarity(std::vector<VerifyRow>& rows, std::uint64_t reps,
                        std::uint64_t seed, unsigned threads)
{
    std::pair<Model, double> const models[] = {{Model::m1, 0},     {Model::m2, 0},
                                               {Model::m1_eps, 1}, {Model::m2_eps, 1},
                                               {Model::u_only, 0}};
    for (auto [model, eps] : models)
    {
        SimConfig config;
        config.dim = 2;
        config.model = ModelKind(model, eps);
        config.measure = MeasureP({0.7, 0.3});
        config.base_seed = seed;
        for (bool hand : {true, false})
        {
            ArrowProbe probe;
            probe.hand = hand;
            probe.offset = make_site({1, 0});
            auto res = stationarity_test(config, 50, probe, reps, threads);
            VerifyRow row;
            row.suite = "stationarity";
            row.name = to_string(model) + (hand ? " hand" : " arrow at X+e1")
                       + " t=50 chi-square p-value";
            row.value = res.p_value;
            row.reference = 1e-3;
            row.pass = res.p_value >= 1e-3;
            row.detail = "chi2 " + format_double(res.chi_square) + ", dof "
                         + std::to_string(res.degrees_of_freedom);
            rows.push_back(row);
        }
    }
}

void suite_projection(std::vector<VerifyRow>& rows, std::uint64_t reps,
                      std::uint64_t seed, unsigned threads)
{
    for (int d : {1, 2})
    {
        auto sticky = sticky_return_prob(d, 5, reps, seed, threads);
        auto from_origin = defect_marginals(5, DefectVertex::origin(d), reps,
                                            seed + 1, threads);
        std::string const label = "d=" + std::to_string(d) + " t=5";
        rows.push_back(sigma_row("projection", label + " D^1 from 0 vs sticky",
                                 from_origin.first_at_zero, sticky));
        rows.push_back(sigma_row("projection", label + " D^2 from 0 vs sticky",
                                 from_origin.second_at_zero, sticky));
        Site x;
        x.x[0] = 1;
        auto from_x = defect_marginals(5, DefectVertex(x, Site{}, d), reps,
                                       seed + 2, threads);
        rows.push_back(sigma_row("projection",
                                 label + " D^2 from (e1,0) vs sticky",
                                 from_x.second_at_zero, sticky));
    }
}

std::uint64_t pick(std::uint64_t reps, std::uint64_t fallback)
{
    return reps ? reps : fallback;
}
}  // namespace

std::vector<VerifyRow> run_suite(std::string const& suite, std::uint64_t reps,
                                 std::uint64_t seed, unsigned threads)
{
    std::vector<VerifyRow> rows;
    bool const all = suite == "all";
    bool known = all;
    auto want = [&](char const* name) {
        bool const hit = all || suite == name;
        known = known || hit;
        return hit;
    };
    if (want("coupling"))
        suite_coupling(rows, pick(reps, 200000), seed, threads);
    if (want("correlation"))
        suite_correlation(rows, pick(reps, 200000), seed, threads);
    if (want("yaglom"))
        suite_yaglom(rows, pick(reps, 100000), seed, threads);
    if (want("tsaw"))
        suite_tsaw(rows, seed);
    if (want("ballistic"))
        suite_ballistic(rows, seed);
    if (want("stationarity"))
        suite_stationarity(rows, pick(reps, 100000), seed, threads);
    if (want("projection"))
        suite_projection(rows, pick(reps, 200000), seed, threads);
    if (!known)
        throw UsageError("unknown suite '" + suite + "'");
    return rows;
}

int cmd_verify(ExperimentConfig const& c, unsigned threads, std::ostream& out,
               std::ostream& err)
{
    if (c.suite.empty())
    {
        err << "error: --suite is required\n";
        return kExitUsage;
    }
    std::vector<VerifyRow> rows;
    try
    {
        rows = run_suite(c.suite, c.reps, c.seed, threads);
    }
    catch (UsageError const& e)
    {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    bool ok = true;
    json jrows = json::array();
    out << std::left << std::setw(6) << "status" << std::setw(10) << "kind"
        << std::setw(13) << "suite" << "check\n";
    for (auto const& r : rows)
    {
        bool const gates = r.kind == "derived"
                           || (r.kind == "stated" && c.strict_stated);
        if (gates && !r.pass)
            ok = false;
        out << std::setw(6) << (r.pass ? "pass" : "FAIL") << std::setw(10) << r.kind
            << std::setw(13) << r.suite << r.name << "  value "
            << std::setprecision(6) << r.value << ", reference " << r.reference;
        if (r.sigma != 0)
            out << ", " << std::setprecision(3) << r.sigma << " sigma";
        if (!r.detail.empty())
            out << " (" << r.detail << ")";
        out << "\n";
        jrows.push_back({{"suite", r.suite},
                         {"check", r.name},
                         {"value", r.value},
                         {"reference", r.reference},
                         {"sigma", std::isfinite(r.sigma) ? json(r.sigma) : json("inf")},
                         {"pass", r.pass},
                         {"kind", r.kind},
                         {"gating", gates},
                         {"detail", r.detail}});
    }
    out << (ok ? "verify: all gating checks passed\n"
               : "verify: gating checks FAILED\n");

    std::string const path = !c.report.empty() ? c.report : c.out;
    if (!path.empty())
    {
        json report{{"experiment", "verify"},
                    {"version", tool_version()},
                    {"config", to_json(c)},
                    {"pass", ok},
                    {"rows", jrows}};
        write_text(path, report.dump(2) + "\n");
    }
    return ok ? kExitOk : kExitVerifyFailed;
}

//---------------------------------------------------------------------------//
int run(int argc, char const* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Stored-momentum lattice walks: simulation and verification"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version());

    ExperimentConfig flags;
    std::string p_text;
    std::string lambda_text;
    std::string config_path;
    std::string write_config;
    unsigned threads = default_threads();

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--write-config", write_config,
                        "Write the effective config as JSON and continue");
        sub->add_option("--threads", threads,
                        "Worker threads (default MOMLAT_THREADS or all cores)");
        sub->add_option("--seed", flags.seed, "Base seed");
        sub->add_option("--out", flags.out, "Output path");
    };

    auto* sim = app.add_subcommand("simulate", "MSD curve on a geometric grid");
    common(sim);
    sim->add_option("--model", flags.model, "m1, m2, m1eps, m2eps or u");
    sim->add_option("--dim", flags.dim, "Lattice dimension");
    sim->add_option("--eps", flags.eps, "Rate of environment-blind moves");
    sim->add_option("--p", p_text, "Axis weights, comma separated");
    sim->add_option("--tmax", flags.tmax, "Horizon");
    sim->add_option("--reps", flags.reps, "Replicas");
    sim->add_option("--time-mode", flags.time_mode, "continuous or jumpchain");

    auto* spec = app.add_subcommand("spectral", "Closed-form quantities");
    common(spec);
    spec->add_option("--quantity", flags.quantity, "I, phihat, upper, lower, boundint");
    spec->add_option("--lambda", lambda_text, "Comma-separated lambdas");
    spec->add_option("--dim", flags.dim, "Dimension");
    spec->add_option("--eps", flags.eps, "Ellipticity");
    spec->add_option("--mode", flags.bound_mode, "boundint: aniso or iso");
    spec->add_option("--points", flags.points, "Quadrature points per axis");

    auto* ver = app.add_subcommand("verify", "Identity checks");
    common(ver);
    ver->add_option("--suite", flags.suite,
                    "coupling, correlation, yaglom, tsaw, ballistic, "
                    "stationarity, projection or all");
    ver->add_option("--reps", flags.reps, "Replicas (0: suite defaults)");
    ver->add_option("--report", flags.report, "JSON report path");
    ver->add_flag("--strict-stated", flags.strict_stated,
                  "Also gate on the stated relations");

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::CallForHelp const&)
    {
        out << app.help();
        return kExitOk;
    }
    catch (CLI::CallForVersion const&)
    {
        out << tool_version() << "\n";
        return kExitOk;
    }
    catch (CLI::ParseError const& e)
    {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    try
    {
        ExperimentConfig c;
        if (!config_path.empty())
            c = config_from_json(json::parse(read_text(config_path)));
        else if (sub == ver)
            c.reps = 0;
        c.command = sub->get_name();

        // Explicit flags override the file.
        auto given = [&](char const* name) {
            auto const* opt = sub->get_option_no_throw(name);
            return opt != nullptr && opt->count() > 0;
        };
        if (given("--seed")) c.seed = flags.seed;
        if (given("--out")) c.out = flags.out;
        if (given("--model")) c.model = flags.model;
        if (given("--dim")) c.dim = flags.dim;
        if (given("--eps")) c.eps = flags.eps;
        if (given("--p")) c.p = parse_list(p_text);
        if (given("--tmax")) c.tmax = flags.tmax;
        if (given("--reps")) c.reps = flags.reps;
        if (given("--time-mode")) c.time_mode = flags.time_mode;
        if (given("--quantity")) c.quantity = flags.quantity;
        if (given("--lambda")) c.lambdas = parse_list(lambda_text);
        if (given("--mode")) c.bound_mode = flags.bound_mode;
        if (given("--points")) c.points = flags.points;
        if (given("--suite")) c.suite = flags.suite;
        if (given("--report")) c.report = flags.report;
        if (given("--strict-stated")) c.strict_stated = flags.strict_stated;

        if (!write_config.empty())
            write_text(write_config, to_json(c).dump(2) + "\n");

        if (sub == sim)
        {
            if (c.model.empty())
            {
                err << "error: --model is required\n" << sim->help();
                return kExitUsage;
            }
            return cmd_simulate(c, threads, out, err);
        }
        if (sub == spec)
            return cmd_spectral(c, out, err);
        return cmd_verify(c, threads, out, err);
    }
    catch (IoError const& e)
    {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    }
    catch (json::exception const& e)
    {
        err << "error: bad config file: " << e.what() << "\n";
        return kExitUsage;
    }
    catch (std::invalid_argument const& e)
    {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace momlat::cli
