#include "trigfit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trigfit/algebra.hpp"
#include "trigfit/calculus.hpp"
#include "trigfit/errors.hpp"
#include "trigfit/io.hpp"
#include "trigfit/pipelines.hpp"
#include "trigfit/pronyaaa.hpp"
#include "trigfit/rpm.hpp"
#include "trigfit/transforms.hpp"

namespace trigfit::cli
{

namespace
{

using io::KeyValues;
using io::ModelFile;

struct Report
{
    KeyValues kv;
    bool converged = true;

    void add(std::string k, std::string v) { kv.emplace_back(std::move(k), std::move(v)); }
    void add(std::string k, double v) { add(std::move(k), io::format_double(v)); }
    void add(std::string k, std::size_t v) { add(std::move(k), std::to_string(v)); }
    void add(std::string k, bool v) { add(std::move(k), std::string(v ? "true" : "false")); }
};

void emit(std::ostream& out, const Report& r)
{
    for (const auto& [k, v] : r.kv)
        out << k << '=' << v << '\n';
}

std::string join(const std::vector<std::string>& v)
{
    if (v.empty())
        return "none";
    std::string s;
    for (const auto& e : v)
        s += (s.empty() ? "" : ";") + e;
    return s;
}

std::string note_text(const std::vector<std::string>& notes)
{
    std::string s = join(notes);
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

io::Model scaled(const io::Model& m, double f)
{
    if (const auto* r = std::get_if<TrigRational>(&m))
    {
        auto v = r->node_values();
        for (double& x : v)
            x *= f;
        return TrigRational(r->nodes(), r->weights(), std::move(v), r->mean_offset() * f);
    }
    const auto& s = std::get<ExpSum>(m);
    auto w = s.weights();
    for (auto& x : w)
        x *= f;
    return ExpSum(std::move(w), s.exponents(), s.constant_term() * f);
}

double evaluate(const io::Model& m, double t)
{
    if (const auto* r = std::get_if<TrigRational>(&m))
        return (*r)(t);
    return std::get<ExpSum>(m)(t);
}

KeyValues config_echo(const FitConfig& cfg, const std::string& extra_key = {},
                      const std::string& extra_value = {})
{
    KeyValues kv = {{"tol", io::format_double(cfg.tol)},
                    {"max_degree", std::to_string(cfg.max_degree)},
                    {"oversample_K", std::to_string(cfg.oversample_K)},
                    {"coeff_fit_M", std::to_string(cfg.coeff_fit_M)},
                    {"seed", std::to_string(cfg.seed)}};
    if (!extra_key.empty())
        kv.emplace_back(extra_key, extra_value);
    return kv;
}

void write_model(const std::string& path, io::Model model, const io::Domain& dom,
                 KeyValues config, const Report& rep)
{
    ModelFile mf{io::model_format_version, std::move(model), dom,
                 io::Provenance{"trigfit", tool_version, std::move(config), rep.kv}};
    io::save_model(path, mf);
}

void write_table(std::ostream& out, const std::string& path,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows)
{
    if (path.empty())
        io::write_csv(out, header, rows);
    else
        io::write_csv_file(path, header, rows);
}

/// Flat tail of the sampled spectrum: median |c_k| over the top quarter of
/// the band at least 0.85 of the median over the quarter below it.
bool suspect_noise(const SampleGrid& g)
{
    if (!g.is_equispaced() || g.size() < 33)
        return false;
    const auto c = sample_coeffs(g);
    const std::size_t n = c.size() - 1;
    double peak = 0.0;
    for (std::size_t k = 1; k <= n; ++k)
        peak = std::max(peak, std::abs(c[k]));
    auto median = [&](std::size_t lo, std::size_t hi) {
        std::vector<double> v;
        for (std::size_t k = lo; k < hi; ++k)
            v.push_back(std::abs(c[k]));
        std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
        return v[v.size() / 2];
    };
    const double mid = median(n / 2, 3 * n / 4);
    const double tail = median(3 * n / 4, n + 1);
    return tail > 1e-10 * peak && tail >= 0.85 * mid;
}

std::optional<io::Domain> domain_option(const std::vector<double>& d)
{
    if (d.empty())
        return std::nullopt;
    if (!(d[1] > d[0]))
        throw Error(ErrorKind::InvalidArgument, "--domain needs a < b");
    return io::Domain{d[0], d[1]};
}

//-----------------------------------------------------------------------------
// fit
//-----------------------------------------------------------------------------

struct FitArgs
{
    std::string input;
    std::string output = "model.json";
    std::string method = "auto";
    double tol = 1e-9;
    std::size_t max_degree = 150;
    std::vector<double> domain;
};

int cmd_fit(const FitArgs& a, std::uint64_t seed, std::ostream& out)
{
    FitConfig cfg;
    cfg.tol = a.tol;
    cfg.max_degree = a.max_degree;
    cfg.seed = seed;
    cfg.validate();

    const auto table = io::read_csv_file(a.input);
    io::Domain dom;
    const SampleGrid g = io::to_grid(table, domain_option(a.domain), dom);

    std::string method = a.method;
    if (method == "auto")
        method = suspect_noise(g) ? "rpm" : "pronyaaa";

    Report rep;
    rep.add("command", std::string("fit"));
    rep.add("method", method);
    io::Model model = ExpSum();
    if (method == "pronyaaa")
    {
        auto fit = fit_pronyaaa(g, cfg);
        rep.converged = fit.report.converged;
        rep.add("kind", std::string("rfun"));
        rep.add("converged", fit.report.converged);
        rep.add("m", fit.report.degree);
        rep.add("error", fit.report.error);
        rep.add("scale", fit.report.scale);
        rep.add("iterations", fit.report.iterations);
        rep.add("spurious", fit.report.spurious_after);
        rep.add("nodes_removed", fit.report.nodes_removed);
        rep.add("fallbacks", std::string(fit.report.cleanup_reverted ? "cleanup_reverted" : "none"));
        rep.add("notes", note_text(fit.report.notes));
        model = std::move(fit.model);
    }
    else
    {
        auto r = fit_rpm_samples(g, cfg);
        double err = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j)
            err = std::max(err, std::abs(g.values()[j] - r.sum(g.locations()[j])));
        rep.converged = r.success;
        rep.add("kind", std::string("efun"));
        rep.add("converged", r.success);
        rep.add("m", r.sum.size());
        rep.add("error", err);
        rep.add("scale", g.scale());
        rep.add("rank", r.rank);
        rep.add("terms_dropped", r.terms_dropped);
        rep.add("fallbacks", std::string("none"));
        rep.add("notes", note_text(r.notes));
        model = std::move(r.sum);
    }
    write_model(a.output, std::move(model), dom, config_echo(cfg, "method", method), rep);
    rep.add("output", a.output);
    emit(out, rep);
    return rep.converged ? Ok : NotConverged;
}

//-----------------------------------------------------------------------------
// transform
//-----------------------------------------------------------------------------

struct ModelArgs
{
    std::string model;
    std::string output;
    double tol = 1e-9;
};

int cmd_transform(const ModelArgs& a, const std::string& dir, std::uint64_t seed,
                  std::ostream& out)
{
    FitConfig cfg;
    cfg.tol = a.tol;
    cfg.seed = seed;
    cfg.validate();
    const auto mf = io::load_model(a.model);

    Report rep;
    rep.add("command", "transform " + dir);
    io::Model result = ExpSum();
    if (dir == "ft")
    {
        if (!mf.is_rfun())
            throw Error(ErrorKind::InvalidArgument, "ft needs an rfun model");
        auto f = ft(std::get<TrigRational>(mf.model), cfg);
        rep.converged = f.converged;
        rep.add("kind", std::string("efun"));
        rep.add("converged", f.converged);
        rep.add("m", f.sum.size());
        rep.add("error", f.validation_error);
        rep.add("threshold", f.threshold);
        rep.add("terms_dropped", f.terms_dropped);
        rep.add("fallbacks", std::string("none"));
        rep.add("notes", note_text(f.notes));
        result = std::move(f.sum);
    }
    else
    {
        if (mf.is_rfun())
            throw Error(ErrorKind::InvalidArgument, "ift needs an efun model");
        auto r = ift(std::get<ExpSum>(mf.model), cfg);
        rep.converged = r.report.converged;
        std::vector<std::string> fb;
        if (r.report.regridded)
            fb.emplace_back("regrid");
        if (r.report.fell_back)
            fb.emplace_back("pronyaaa");
        rep.add("kind", std::string("rfun"));
        rep.add("converged", r.report.converged);
        rep.add("m", r.model.degree());
        rep.add("error", r.report.error);
        rep.add("scale", r.report.scale);
        rep.add("oversample_K", r.report.oversample_K);
        rep.add("spurious", r.report.spurious);
        rep.add("fallbacks", join(fb));
        rep.add("notes", note_text(r.report.notes));
        result = std::move(r.model);
    }
    if (a.output.empty())
        throw Error(ErrorKind::InvalidArgument, "--output is required");
    write_model(a.output, std::move(result), mf.domain, config_echo(cfg, "direction", dir), rep);
    rep.add("output", a.output);
    emit(out, rep);
    return rep.converged ? Ok : NotConverged;
}

//-----------------------------------------------------------------------------
// eval
//-----------------------------------------------------------------------------

struct EvalArgs
{
    std::string model;
    std::string output;
    std::size_t grid = 0;
    std::string points;
};

int cmd_eval(const EvalArgs& a, std::ostream& out)
{
    const auto mf = io::load_model(a.model);
    std::vector<double> xs;
    if (!a.points.empty())
    {
        const auto t = io::read_csv_file(a.points);
        xs = t.x.empty() ? t.y : t.x;
    }
    else
    {
        if (a.grid == 0)
            throw Error(ErrorKind::InvalidArgument, "eval needs --grid n or --points file");
        for (std::size_t j = 0; j < a.grid; ++j)
            xs.push_back(mf.domain.from_unit(static_cast<double>(j) / static_cast<double>(a.grid)));
    }
    std::vector<std::vector<double>> rows;
    rows.reserve(xs.size());
    for (double x : xs)
        rows.push_back({x, evaluate(mf.model, mf.domain.to_unit(x))});
    write_table(out, a.output, {"x", "value"}, rows);
    if (!a.output.empty())
    {
        Report rep;
        rep.add("command", std::string("eval"));
        rep.add("points", xs.size());
        rep.add("output", a.output);
        emit(out, rep);
    }
    return Ok;
}

//-----------------------------------------------------------------------------
// analyze
//-----------------------------------------------------------------------------

TrigRational as_rfun(const ModelFile& mf, const FitConfig& cfg, Report& rep)
{
    if (mf.is_rfun())
        return std::get<TrigRational>(mf.model);
    auto r = ift(std::get<ExpSum>(mf.model), cfg);
    rep.add("ift_converged", r.report.converged);
    rep.add("ift_error", r.report.error);
    if (!r.report.converged)
        rep.converged = false;
    return r.model;
}

ExpSum as_efun(const io::Model& m, const FitConfig& cfg, Report& rep, const std::string& tag)
{
    if (const auto* s = std::get_if<ExpSum>(&m))
        return *s;
    auto f = ft(std::get<TrigRational>(m), cfg);
    rep.add("ft_" + tag + "_converged", f.converged);
    if (!f.converged)
        rep.converged = false;
    return f.sum;
}

int cmd_analyze(const ModelArgs& a, const std::string& what, std::uint64_t seed,
                std::ostream& out)
{
    FitConfig cfg;
    cfg.tol = a.tol;
    cfg.seed = seed;
    cfg.validate();
    const auto mf = io::load_model(a.model);
    const double len = mf.domain.length();

    Report rep;
    rep.add("command", "analyze " + what);
    const TrigRational r = as_rfun(mf, cfg, rep);

    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    if (what == "roots")
    {
        header = {"x", "value"};
        for (double z : roots(r))
            rows.push_back({mf.domain.from_unit(z), r(z)});
    }
    else if (what == "poles")
    {
        header = {"re", "im", "residue_re", "residue_im"};
        const auto p = poles_and_residues(r);
        for (std::size_t k = 0; k < p.size(); ++k)
            rows.push_back({mf.domain.from_unit(p.poles[k].real()), len * p.poles[k].imag(),
                            p.residues[k].real(), p.residues[k].imag()});
    }
    else
    {
        header = {"x", "value", "curvature", "type"};
        const auto mins = extrema(r, ExtremumKind::Min, cfg);
        const auto maxs = extrema(r, ExtremumKind::Max, cfg);
        std::vector<std::vector<double>> all;
        for (const auto& e : mins.points)
            all.push_back({mf.domain.from_unit(e.x), e.value, e.curvature / (len * len), -1.0});
        for (const auto& e : maxs.points)
            all.push_back({mf.domain.from_unit(e.x), e.value, e.curvature / (len * len), 1.0});
        for (const auto& e : mins.flat)
            all.push_back({mf.domain.from_unit(e.x), e.value, e.curvature / (len * len), 0.0});
        std::sort(all.begin(), all.end());
        rows = std::move(all);
        if (mins.fallback || maxs.fallback)
            rep.add("fallbacks", std::string("grid_scan"));
    }
    rep.add("count", rows.size());
    write_table(out, a.output, header, rows);
    if (!a.output.empty())
    {
        rep.add("output", a.output);
        emit(out, rep);
    }
    return rep.converged ? Ok : NotConverged;
}

//-----------------------------------------------------------------------------
// op
//-----------------------------------------------------------------------------

struct OpArgs
{
    std::string lhs;
    std::string rhs;
    std::string op;
    std::string output;
    double tol = 1e-9;
};

int cmd_op(const OpArgs& a, std::uint64_t seed, std::ostream& out)
{
    FitConfig cfg;
    cfg.tol = a.tol;
    cfg.seed = seed;
    cfg.validate();
    const auto ma = io::load_model(a.lhs);
    const auto mb = io::load_model(a.rhs);
    if (ma.domain.a != mb.domain.a || ma.domain.b != mb.domain.b)
        throw Error(ErrorKind::InvalidArgument, "op: operands have different domains");
    const double len = ma.domain.length();
    // Convolutions over [a, b) carry the period length.
    const double factor = (a.op == "conv" || a.op == "corr") ? len : 1.0;

    Report rep;
    rep.add("command", "op " + a.op);
    io::Model result = ExpSum();
    std::vector<std::string> fb;

    if (ma.is_rfun() && mb.is_rfun() && (a.op == "add" || a.op == "mul"))
    {
        const auto& s = std::get<TrigRational>(ma.model);
        const auto& g = std::get<TrigRational>(mb.model);
        auto res = a.op == "add" ? add_rfun(s, g, cfg) : mul_rfun(s, g, cfg);
        rep.converged = res.report.converged;
        if (res.fell_back)
            fb.emplace_back("exp_sum_route");
        rep.add("kind", std::string("rfun"));
        rep.add("converged", res.report.converged);
        rep.add("m", res.model.degree());
        rep.add("error", res.report.error);
        result = std::move(res.model);
    }
    else
    {
        const ExpSum s = as_efun(ma.model, cfg, rep, "lhs");
        const ExpSum g = as_efun(mb.model, cfg, rep, "rhs");
        ExpSum sum;
        double err = 0.0;
        bool ok = true;
        if (a.op == "add")
            sum = add_expsum(s, g);
        else
        {
            const auto c = a.op == "conv" ? conv(s, g, 1e-12, cfg.seed)
                           : a.op == "corr" ? corr(s, g, 1e-12, cfg.seed)
                                            : mul(s, g, 1e-12, cfg.seed);
            sum = c.sum;
            err = c.error;
            ok = c.converged;
        }
        if (!ok)
            rep.converged = false;
        if (ma.is_rfun() && mb.is_rfun())
        {
            auto r = ift(sum, cfg);
            fb.emplace_back("via_exp_sums");
            if (!r.report.converged)
                rep.converged = false;
            rep.add("kind", std::string("rfun"));
            rep.add("converged", ok && r.report.converged);
            rep.add("m", r.model.degree());
            rep.add("error", std::max(err, r.report.error));
            result = std::move(r.model);
        }
        else
        {
            rep.add("kind", std::string("efun"));
            rep.add("converged", ok);
            rep.add("m", sum.size());
            rep.add("error", err);
            result = std::move(sum);
        }
    }
    if (factor != 1.0)
        result = scaled(result, factor);
    rep.add("fallbacks", join(fb));
    if (a.output.empty())
        throw Error(ErrorKind::InvalidArgument, "--output is required");
    write_model(a.output, std::move(result), ma.domain, config_echo(cfg, "op", a.op), rep);
    rep.add("output", a.output);
    emit(out, rep);
    return rep.converged ? Ok : NotConverged;
}

//-----------------------------------------------------------------------------
// diff / int
//-----------------------------------------------------------------------------

int cmd_diff(const ModelArgs& a, unsigned order, std::uint64_t seed, std::ostream& out)
{
    FitConfig cfg;
    cfg.tol = a.tol;
    cfg.seed = seed;
    cfg.validate();
    if (order == 0)
        throw Error(ErrorKind::InvalidArgument, "--order must be positive");
    const auto mf = io::load_model(a.model);
    const double f = std::pow(mf.domain.length(), -static_cast<double>(order));

    Report rep;
    rep.add("command", std::string("diff"));
    rep.add("order", static_cast<std::size_t>(order));
    io::Model result = ExpSum();
    if (mf.is_rfun())
    {
        const auto& r = std::get<TrigRational>(mf.model);
        const std::size_t n = std::max<std::size_t>(4096, 32 * r.nodes().size());
        auto d = refit_derivative(r, order, n, cfg);
        rep.converged = d.report.converged;
        rep.add("kind", std::string("rfun"));
        rep.add("converged", d.report.converged);
        rep.add("m", d.report.degree);
        rep.add("error", d.report.error * f);
        result = std::move(d.model);
    }
    else
    {
        auto d = refit_expsum_derivative(std::get<ExpSum>(mf.model), order, cfg);
        rep.converged = d.success;
        rep.add("kind", std::string("efun"));
        rep.add("converged", d.success);
        rep.add("m", d.sum.size());
        result = std::move(d.sum);
    }
    result = scaled(result, f);
    if (a.output.empty())
        throw Error(ErrorKind::InvalidArgument, "--output is required");
    write_model(a.output, std::move(result), mf.domain,
                config_echo(cfg, "order", std::to_string(order)), rep);
    rep.add("output", a.output);
    emit(out, rep);
    return rep.converged ? Ok : NotConverged;
}

struct IntArgs
{
    std::string model;
    std::string output;
    std::vector<double> interval;
    std::size_t grid = 0;
};

int cmd_int(const IntArgs& a, std::ostream& out)
{
    const auto mf = io::load_model(a.model);
    const auto& dom = mf.domain;
    const double len = dom.length();

    // int_{dom.a}^{x} in domain units, for x inside the domain
    std::function<double(double)> prim;
    std::function<double(double, double)> definite;
    if (mf.is_rfun())
    {
        const auto& r = std::get<TrigRational>(mf.model);
        auto g = std::make_shared<Antiderivative>(r);
        prim = [g, len](double t) { return len * (*g)(t); };
        definite = [r, len](double t0, double t1) { return len * definite_sum(r, t0, t1); };
    }
    else
    {
        const auto& s = std::get<ExpSum>(mf.model);
        const double c = s.constant_term();
        const ExpSum zero_mean(s.weights(), s.exponents(), 0.0);
        auto g = std::make_shared<ExpSumAntiderivative>(zero_mean);
        prim = [g, c, len](double t) { return len * ((*g)(t) + c * t); };
        definite = [s, len](double t0, double t1) { return len * definite_sum(s, t0, t1); };
    }

    Report rep;
    rep.add("command", std::string("int"));
    if (a.grid > 0)
    {
        std::vector<std::vector<double>> rows;
        for (std::size_t j = 0; j < a.grid; ++j)
        {
            const double t = static_cast<double>(j) / static_cast<double>(a.grid);
            rows.push_back({dom.from_unit(t), prim(t)});
        }
        write_table(out, a.output, {"x", "integral"}, rows);
        if (a.output.empty())
            return Ok;
        rep.add("points", rows.size());
        rep.add("output", a.output);
        emit(out, rep);
        return Ok;
    }
    double lo = dom.a, hi = dom.b;
    if (!a.interval.empty())
    {
        lo = a.interval[0];
        hi = a.interval[1];
    }
    if (lo > hi)
        throw Error(ErrorKind::EmptyInterval, "int: interval has a > b");
    const double t0 = (lo - dom.a) / len;
    const double t1 = (hi - dom.a) / len;
    if (t0 < -1e-15 || t1 > 1.0 + 1e-15)
        throw Error(ErrorKind::InvalidArgument, "int: interval outside the model domain");
    const double v = definite(std::clamp(t0, 0.0, 1.0), std::clamp(t1, 0.0, 1.0));
    rep.add("a", lo);
    rep.add("b", hi);
    rep.add("integral", v);
    emit(out, rep);
    return Ok;
}

int exit_code(ErrorKind k)
{
    switch (k)
    {
    case ErrorKind::Parse:
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidModel:
    case ErrorKind::UnsupportedGrid:
    case ErrorKind::EmptyInterval:
        return ParseFailure;
    case ErrorKind::DegenerateInput:
    case ErrorKind::Numerical:
        return NumericalFailure;
    }
    return NumericalFailure;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Trigonometric rational and exponential-sum fitting"};
    app.set_version_flag("--version", std::string("trigfit ") + tool_version);
    app.require_subcommand(1);
    std::uint64_t seed = 20240611;
    app.add_option("--seed", seed, "Seed for randomized validation sampling")->capture_default_str();

    FitArgs fa;
    auto* fit = app.add_subcommand("fit", "Fit a model to sampled data");
    fit->add_option("input", fa.input, "CSV with columns x,y or a single column y")->required();
    fit->add_option("--tol", fa.tol, "Relative tolerance")->capture_default_str();
    fit->add_option("--max-degree", fa.max_degree, "Largest m for pronyAAA")->capture_default_str();
    fit->add_option("--method", fa.method, "pronyaaa, rpm or auto")
        ->check(CLI::IsMember({"pronyaaa", "rpm", "auto"}))
        ->capture_default_str();
    fit->add_option("--output,-o", fa.output, "Model file to write")->capture_default_str();
    fit->add_option("--domain", fa.domain, "Sample interval a b")->expected(2);

    ModelArgs ta;
    std::string direction;
    auto* transform = app.add_subcommand("transform", "Convert between rfun and efun");
    transform->add_option("model", ta.model)->required();
    transform->add_option("direction", direction)->required()->check(CLI::IsMember({"ft", "ift"}));
    transform->add_option("--output,-o", ta.output)->required();
    transform->add_option("--tol", ta.tol)->capture_default_str();

    EvalArgs ea;
    auto* eval = app.add_subcommand("eval", "Evaluate a model to CSV");
    eval->add_option("model", ea.model)->required();
    auto* grid_opt = eval->add_option("--grid", ea.grid, "Equispaced points over the domain");
    auto* pts_opt = eval->add_option("--points", ea.points, "CSV of x values");
    grid_opt->excludes(pts_opt);
    eval->add_option("--output,-o", ea.output, "CSV file (stdout if omitted)");

    ModelArgs aa;
    std::string what;
    auto* analyze = app.add_subcommand("analyze", "Roots, poles or extrema as CSV");
    analyze->add_option("model", aa.model)->required();
    analyze->add_option("what", what)->required()->check(CLI::IsMember({"roots", "poles", "extrema"}));
    analyze->add_option("--output,-o", aa.output, "CSV file (stdout if omitted)");
    analyze->add_option("--tol", aa.tol)->capture_default_str();

    OpArgs oa;
    auto* op = app.add_subcommand("op", "Binary operation on two models");
    op->add_option("lhs", oa.lhs)->required();
    op->add_option("rhs", oa.rhs)->required();
    op->add_option("operation", oa.op)->required()->check(CLI::IsMember({"add", "conv", "mul", "corr"}));
    op->add_option("--output,-o", oa.output)->required();
    op->add_option("--tol", oa.tol)->capture_default_str();

    ModelArgs da;
    unsigned order = 1;
    auto* diff = app.add_subcommand("diff", "Derivative as a model");
    diff->add_option("model", da.model)->required();
    diff->add_option("--order", order)->capture_default_str();
    diff->add_option("--output,-o", da.output)->required();
    diff->add_option("--tol", da.tol)->capture_default_str();

    IntArgs ia;
    auto* integ = app.add_subcommand("int", "Definite integral, or antiderivative samples as CSV");
    integ->add_option("model", ia.model)->required();
    integ->add_option("--interval", ia.interval, "Integration limits a b")->expected(2);
    integ->add_option("--grid", ia.grid, "Antiderivative on n equispaced points");
    integ->add_option("--output,-o", ia.output, "CSV file (stdout if omitted)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        std::ostringstream o, er;
        const int code = app.exit(e, o, er);
        out << o.str();
        err << er.str();
        return code == 0 ? Ok : ParseFailure;
    }

    try
    {
        if (*fit)
            return cmd_fit(fa, seed, out);
        if (*transform)
            return cmd_transform(ta, direction, seed, out);
        if (*eval)
            return cmd_eval(ea, out);
        if (*analyze)
            return cmd_analyze(aa, what, seed, out);
        if (*op)
            return cmd_op(oa, seed, out);
        if (*diff)
            return cmd_diff(da, order, seed, out);
        if (*integ)
            return cmd_int(ia, out);
    }
    catch (const Error& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return NumericalFailure;
    }
    return ParseFailure;
}

} // namespace trigfit::cli
