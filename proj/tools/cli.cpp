#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ios>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mwk/errors.hpp"
#include "mwk/eynard_mehta.hpp"
#include "mwk/specfun.hpp"
#include "mwk/whittaker_kernel.hpp"
#include "verify.hpp"

namespace mwk::cli {

using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;
constexpr double kDefaultRelTol = 1e-10;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::optional<double> rel_tol;
    std::string format = "json";

    double kappa = 0.0, mu = 0.5, x = 0.0;
    double z = -0.3, zp = -0.6;
    std::vector<double> points;

    double xmin = 0.0, xmax = 0.0;
    std::size_t n = 0;
    std::string out_path;

    std::uint64_t seed = 0;
    std::optional<std::size_t> trials;

    std::string model_path;
    std::vector<double> x1, x2;
    std::size_t samples = 1000;
};

// Flag, then environment, then the default.
std::optional<double> configured_rel_tol(const Options& o) {
    if (o.rel_tol) return o.rel_tol;
    const char* env = std::getenv(kRelTolEnv);
    if (env == nullptr || *env == '\0') return std::nullopt;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(env, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != std::string(env).size() || !(v > 0.0))
        throw InputError(std::string(kRelTolEnv) + " must be a positive number, got '" + env + "'");
    return v;
}

numerics::QuadratureSpec kernel_spec(const Options& o) {
    numerics::QuadratureSpec s{configured_rel_tol(o).value_or(kDefaultRelTol), 0.0, 2000};
    s.validate();
    return s;
}

numerics::QuadratureSpec em_spec(const Options& o) {
    auto s = em::default_em_spec();
    if (auto r = configured_rel_tol(o)) s.rel_tol = *r;
    s.validate();
    return s;
}

// Round-trip CSV output.
std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

whittaker::Configuration configuration(const std::vector<double>& values) {
    whittaker::Configuration c;
    for (double v : values) c.emplace_back(v);
    return c;
}

json matrix_json(const numerics::DenseMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto r = m.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return rows;
}

em::TwoMatrixModel model_from(const Options& o) {
    try {
        return em::load_model(o.model_path);
    } catch (const std::ios_base::failure& e) {
        throw IoError(e.what());
    }
}

int cmd_wfun(const Options& o, std::ostream& out) {
    const double w = specfun::whittaker_w({o.kappa, o.mu, o.x});
    const double dw = specfun::whittaker_w_deriv({o.kappa, o.mu, o.x});
    if (o.format == "csv") {
        out << "kappa,mu,x,value,derivative\n"
            << num(o.kappa) << ',' << num(o.mu) << ',' << num(o.x) << ',' << num(w) << ',' << num(dw)
            << '\n';
    } else {
        out << json{{"schema_version", kSchemaVersion}, {"kappa", o.kappa}, {"mu", o.mu}, {"x", o.x},
                    {"value", w}, {"derivative", dw}}
                   .dump()
            << '\n';
    }
    return kOk;
}

int cmd_kernel(const Options& o, std::ostream& out) {
    const auto p = whittaker::validate_params(o.z, o.zp);
    const auto pts = configuration(o.points);
    const auto k = whittaker::kernel_matrix(p, pts);
    if (o.format == "csv") {
        out << "x,y,K\n";
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = 0; j < pts.size(); ++j)
                out << num(o.points[i]) << ',' << num(o.points[j]) << ',' << num(k(i, j)) << '\n';
    } else {
        out << json{{"schema_version", kSchemaVersion},
                    {"params", {{"z", p.z}, {"zp", p.zp}}},
                    {"points", o.points},
                    {"value", matrix_json(k)}}
                   .dump()
            << '\n';
    }
    return kOk;
}

int cmd_corr(const Options& o, std::ostream& out) {
    const auto p = whittaker::validate_params(o.z, o.zp);
    const double rho = whittaker::correlation(p, configuration(o.points));
    if (o.format == "csv") {
        out << "n,rho\n" << o.points.size() << ',' << num(rho) << '\n';
    } else {
        out << json{{"schema_version", kSchemaVersion},
                    {"params", {{"z", p.z}, {"zp", p.zp}}},
                    {"points", o.points},
                    {"value", rho}}
                   .dump()
            << '\n';
    }
    return kOk;
}

void write_grid(const Options& o, const whittaker::KernelParams& p, std::ostream& os) {
    os << "x,rho1\n";
    for (std::size_t i = 0; i < o.n; ++i) {
        const double x = o.n == 1 ? o.xmin
                                  : o.xmin + (o.xmax - o.xmin) * static_cast<double>(i) /
                                                 static_cast<double>(o.n - 1);
        os << num(x) << ',' << num(whittaker::kernel_diag(p, whittaker::SignedPoint(x))) << '\n';
    }
}

int cmd_grid(const Options& o, std::ostream& out) {
    const auto p = whittaker::validate_params(o.z, o.zp);
    if (!(o.xmin < o.xmax)) throw InputError("grid needs xmin < xmax");
    if (o.n == 0) throw InputError("grid needs n >= 1");
    for (std::size_t i = 0; i < o.n; ++i) {
        const double x = o.n == 1 ? o.xmin
                                  : o.xmin + (o.xmax - o.xmin) * static_cast<double>(i) /
                                                 static_cast<double>(o.n - 1);
        if (x == 0.0) throw InputError("grid point " + std::to_string(i) + " is 0; shift xmin, xmax or n");
    }
    if (o.out_path.empty()) {
        write_grid(o, p, out);
        return kOk;
    }
    std::ofstream file(o.out_path);
    if (!file) throw IoError("cannot open " + o.out_path + " for writing");
    write_grid(o, p, file);
    file.flush();
    if (!file) throw IoError("write to " + o.out_path + " failed");
    return kOk;
}

int report_verify(const VerifyReport& r, std::ostream& out, std::ostream& err) {
    out << r.to_json().dump() << '\n';
    if (r.pass) return kOk;
    err << "verify " << r.suite << " failed: max_residual " << num(r.max_residual) << " >= threshold "
        << num(r.threshold) << "\noffending instance: " << r.worst.dump() << '\n';
    return kFailure;
}

int cmd_verify(const std::string& suite, const Options& o, std::ostream& out, std::ostream& err) {
    auto trials = [&](std::size_t fallback) { return o.trials.value_or(fallback); };
    if (suite == "necklace") return report_verify(verify_necklace(o.seed, trials(50)), out, err);
    if (suite == "laplace") return report_verify(verify_laplace(o.seed, trials(20)), out, err);
    if (suite == "moment") return report_verify(verify_moment(o.seed, trials(20)), out, err);
    const auto p = whittaker::validate_params(o.z, o.zp);
    if (suite == "jsym") return report_verify(verify_jsym(p, o.seed, trials(1)), out, err);
    if (suite == "stieltjes")
        return report_verify(verify_stieltjes(p, o.seed, trials(4), kernel_spec(o)), out, err);
    const auto model = o.model_path.empty() ? em::gaussian_model(1.0, 1.0, 0.5, 2) : model_from(o);
    return report_verify(verify_em(model, o.seed, trials(3), em_spec(o)), out, err);
}

int cmd_em(const std::string& sub, const Options& o, std::ostream& out) {
    const auto model = model_from(o);
    if (sub == "mc") {
        const auto s = em::mc_sample(model, o.samples, o.seed);
        if (o.out_path.empty()) {
            em::write_samples_csv(out, s);
            return kOk;
        }
        std::ofstream file(o.out_path);
        if (!file) throw IoError("cannot open " + o.out_path + " for writing");
        em::write_samples_csv(file, s);
        file.flush();
        if (!file) throw IoError("write to " + o.out_path + " failed");
        return kOk;
    }
    const auto spec = em_spec(o);
    const auto moments = em::pairing_moments(model, spec);
    const auto sys = em::biorthogonalize(moments);
    if (sub == "moments") {
        out << json{{"schema_version", kSchemaVersion},
                    {"N", model.N},
                    {"moments", matrix_json(moments)},
                    {"P", matrix_json(sys.P)},
                    {"Q", matrix_json(sys.Q)},
                    {"biorthogonality_residual", em::biorthogonality_residual(sys, moments)}}
                   .dump()
            << '\n';
        return kOk;
    }
    const em::CorrelationQuery q{o.x1, o.x2};
    if (q.x1.empty() && q.x2.empty()) throw InputError("em rho needs at least one of --x1, --x2");
    const double v = em::rho_kl(sys, model, q, spec);
    out << json{{"schema_version", kSchemaVersion},
                {"x1", q.x1},
                {"x2", q.x2},
                {"k", q.x1.size()},
                {"l", q.x2.size()},
                {"value", v}}
               .dump()
        << '\n';
    return kOk;
}

void add_params(CLI::App* app, Options& o) {
    app->add_option("--z", o.z, "Kernel parameter z")->capture_default_str();
    app->add_option("--zp", o.zp, "Kernel parameter z'")->capture_default_str();
}

void add_points(CLI::App* app, Options& o) {
    app->add_option("--points", o.points, "Comma-separated nonzero points; use --points=-1,2 for a leading minus")
        ->delimiter(',')
        ->required();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Matrix Whittaker kernel and coupled two-matrix correlations"};
    app.name("mwk");
    app.require_subcommand(1);
    app.add_option("--rel-tol", o.rel_tol,
                   std::string("Quadrature relative tolerance (default: $") + kRelTolEnv + ", else 1e-10)");

    auto* wfun = app.add_subcommand("wfun", "Whittaker function W_{kappa,mu}(x) and its derivative");
    wfun->add_option("--kappa", o.kappa)->capture_default_str();
    wfun->add_option("--mu", o.mu)->capture_default_str();
    wfun->add_option("--x", o.x)->required();

    auto* kernel = app.add_subcommand("kernel", "Kernel matrix [K(x_i, x_j)]");
    auto* corr = app.add_subcommand("corr", "Correlation function det[K(x_i, x_j)]");
    for (auto* sub : {wfun, kernel, corr})
        sub->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    for (auto* sub : {kernel, corr}) {
        add_params(sub, o);
        add_points(sub, o);
    }

    auto* grid = app.add_subcommand("grid", "CSV of the one-point density on a uniform grid");
    add_params(grid, o);
    grid->add_option("--xmin", o.xmin)->required();
    grid->add_option("--xmax", o.xmax)->required();
    grid->add_option("--n", o.n)->required();
    grid->add_option("--out", o.out_path, "Output file (default: stdout)");

    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    verify->require_subcommand(1);
    std::vector<CLI::App*> suites;
    for (const char* name : {"necklace", "laplace", "jsym", "stieltjes", "em", "moment"}) {
        auto* s = verify->add_subcommand(name);
        s->add_option("--seed", o.seed)->capture_default_str();
        s->add_option("--trials", o.trials);
        suites.push_back(s);
    }
    add_params(suites[2], o);
    add_params(suites[3], o);
    suites[4]->add_option("--model", o.model_path, "Model JSON (default: a = b = 1, c = 0.5, N = 2)");

    auto* emc = app.add_subcommand("em", "Coupled two-matrix model");
    emc->require_subcommand(1);
    auto* moments = emc->add_subcommand("moments", "Pairing moments and biorthogonal coefficients");
    auto* rho = emc->add_subcommand("rho", "Correlation function rho_{k,l}");
    rho->add_option("--x1", o.x1, "First-matrix points")->delimiter(',');
    rho->add_option("--x2", o.x2, "Second-matrix points")->delimiter(',');
    auto* mc = emc->add_subcommand("mc", "Monte Carlo eigenvalue samples (CSV)");
    mc->add_option("--samples", o.samples)->capture_default_str();
    mc->add_option("--seed", o.seed)->capture_default_str();
    mc->add_option("--out", o.out_path, "Output file (default: stdout)");
    for (auto* sub : {moments, rho, mc}) sub->add_option("--model", o.model_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "mwk: " << e.what() << '\n';
        return kInvalidInput;
    }

    try {
        if (wfun->parsed()) return cmd_wfun(o, out);
        if (kernel->parsed()) return cmd_kernel(o, out);
        if (corr->parsed()) return cmd_corr(o, out);
        if (grid->parsed()) return cmd_grid(o, out);
        if (verify->parsed()) {
            for (auto* s : suites)
                if (s->parsed()) return cmd_verify(s->get_name(), o, out, err);
        }
        for (auto* s : {moments, rho, mc})
            if (s->parsed()) return cmd_em(s->get_name(), o, out);
        err << "mwk: no command given\n";
        return kInvalidInput;
    } catch (const InputError& e) {
        err << "mwk: invalid input: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const DomainError& e) {
        err << "mwk: invalid input: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const SizeGuardError& e) {
        err << "mwk: invalid input: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const IoError& e) {
        err << "mwk: I/O error: " << e.what() << '\n';
        return kIoError;
    } catch (const DegeneracyError& e) {
        err << "mwk: " << e.what() << '\n';
        return kFailure;
    } catch (const QuadratureError& e) {
        err << "mwk: quadrature failed: " << e.what() << " (best estimate " << num(e.best_estimate())
            << ")\n";
        return kFailure;
    } catch (const std::exception& e) {
        err << "mwk: numerical failure: " << e.what() << '\n';
        return kFailure;
    }
}

}  // namespace mwk::cli
