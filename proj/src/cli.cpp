#include "superfid/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "detail/format.hpp"
#include "superfid/batch.hpp"
#include "superfid/constants.hpp"
#include "superfid/samplers.hpp"
#include "superfid/verify.hpp"

namespace superfid {

using detail::num;
using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    std::optional<std::uint64_t> seed;
    int workers = 1;
    std::string format;
    std::string out_path;
};

struct SampleOptions {
    std::string measure = "hs";
    int dim = 2;
    std::uint64_t count = 1000;
    bool full_matrix = false;
    std::optional<std::uint64_t> max_proposals;
};

struct EstimateOptions {
    std::string measure = "g";
    int dim = 2;
    std::string method = "exact";
    std::uint64_t count = 100000;
    int k_max = 20;
    std::string moments = "mc";
};

struct GridOptions {
    std::string measure = "g";
    int dim = 3;
    int resolution = 100;
};

struct VerifyCliOptions {
    std::string suite;
    std::optional<int> dim;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    const char* env = std::getenv("SUPERFID_SEED");
    if (env == nullptr || *env == '\0') return 0;
    std::uint64_t v = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto r = std::from_chars(env, end, v);
    if (r.ec != std::errc() || r.ptr != end) throw UsageError("SUPERFID_SEED is not an unsigned integer");
    return v;
}

MeasureKind measure_of(const std::string& tag) {
    const auto m = parse_measure(tag);
    if (!m) throw UsageError("unknown measure '" + tag + "' (expected hs, bures or g)");
    return *m;
}

void emit(const std::string& text, const CommonOptions& common, std::ostream& out) {
    if (common.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(common.out_path, std::ios::binary);
    if (!f) throw UsageError("cannot open output file '" + common.out_path + "'");
    f << text;
    if (!f) throw UsageError("failed writing output file '" + common.out_path + "'");
}

json rejection_json(const RejectionReport& r) {
    return {{"proposed", r.proposed},
            {"accepted", r.accepted},
            {"empirical_rate", r.empirical_rate()},
            {"bound_constant", r.bound_constant},
            {"envelope_sup", r.envelope_sup}};
}

std::string sample_csv(const SampleBatch& b, const SampleOptions& o, int workers) {
    std::ostringstream s;
    s << "# schema_version=" << kSchemaVersion << '\n'
      << "# command=sample\n"
      << "# measure=" << measure_tag(b.measure) << '\n'
      << "# dim=" << b.dim << '\n'
      << "# count=" << b.eigen_records.size() << '\n'
      << "# seed=" << b.seed << '\n'
      << "# workers=" << workers << '\n';
    if (b.rejection) {
        const RejectionReport& r = *b.rejection;
        s << "# rejection_proposed=" << r.proposed << '\n'
          << "# rejection_accepted=" << r.accepted << '\n'
          << "# rejection_empirical_rate=" << num(r.empirical_rate()) << '\n'
          << "# rejection_bound_constant=" << num(r.bound_constant) << '\n'
          << "# rejection_envelope_sup=" << num(r.envelope_sup) << '\n';
    }
    for (int i = 1; i <= b.dim; ++i) s << "lambda_" << i << ',';
    s << "purity";
    if (o.full_matrix) {
        for (int i = 1; i <= b.dim; ++i) {
            for (int j = 1; j <= b.dim; ++j) s << ",m_" << i << '_' << j << "_re,m_" << i << '_' << j << "_im";
        }
    }
    s << '\n';
    for (std::size_t k = 0; k < b.eigen_records.size(); ++k) {
        for (double x : b.eigen_records[k].values()) s << num(x) << ',';
        s << num(b.purity_records[k]);
        if (o.full_matrix) {
            const ComplexMatrix& m = b.matrices[k];
            for (int i = 0; i < b.dim; ++i) {
                for (int j = 0; j < b.dim; ++j) s << ',' << num(m(i, j).real()) << ',' << num(m(i, j).imag());
            }
        }
        s << '\n';
    }
    return s.str();
}

std::string sample_json(const SampleBatch& b, const SampleOptions& o, int workers) {
    json j = {{"schema_version", kSchemaVersion},
              {"command", "sample"},
              {"measure", measure_tag(b.measure)},
              {"dim", b.dim},
              {"count", b.eigen_records.size()},
              {"seed", b.seed},
              {"workers", workers}};
    if (b.rejection) j["rejection"] = rejection_json(*b.rejection);
    json records = json::array();
    for (std::size_t k = 0; k < b.eigen_records.size(); ++k) {
        const auto v = b.eigen_records[k].values();
        json r = {{"lambda", std::vector<double>(v.begin(), v.end())}, {"purity", b.purity_records[k]}};
        if (o.full_matrix) {
            json m = json::array();
            const ComplexMatrix& a = b.matrices[k];
            for (int i = 0; i < b.dim; ++i) {
                for (int c = 0; c < b.dim; ++c) m.push_back({a(i, c).real(), a(i, c).imag()});
            }
            r["matrix"] = std::move(m);
        }
        records.push_back(std::move(r));
    }
    j["records"] = std::move(records);
    return j.dump() + '\n';
}

int cmd_sample(const SampleOptions& o, const CommonOptions& common, std::ostream& out, std::ostream& err) {
    const MeasureKind m = measure_of(o.measure);
    const std::uint64_t seed = resolve_seed(common.seed);
    const ShardPlan plan{seed, common.workers, Execution::Parallel};
    try {
        const SampleBatch b =
            sample_batch(m, o.dim, o.count, plan, {.keep_matrices = o.full_matrix, .max_proposals = o.max_proposals});
        emit(common.format == "json" ? sample_json(b, o, common.workers) : sample_csv(b, o, common.workers), common,
             out);
    } catch (const BudgetExhausted& e) {
        const RejectionReport& r = e.report();
        err << "error: " << e.what() << " (proposed " << r.proposed << ", accepted " << r.accepted << ")\n";
        return kExitBudgetExhausted;
    }
    return kExitOk;
}

std::string_view kind_of(const NormalizationEstimate& e) {
    if (e.method == NormalizationMethod::Exact) return "exact";
    if (e.is_upper_bound()) return "upper_bound";
    return "estimate";
}

int cmd_estimate(const EstimateOptions& o, const CommonOptions& common, std::ostream& out) {
    const MeasureKind m = measure_of(o.measure);
    const std::uint64_t seed = resolve_seed(common.seed);
    const ShardPlan plan{seed, common.workers, Execution::Parallel};
    const bool g = m == MeasureKind::SuperfidelityG;

    NormalizationEstimate e;
    json extra = json::object();
    if (o.method == "exact") {
        if (m == MeasureKind::HilbertSchmidt) {
            e = c_hs(o.dim);
        } else if (g) {
            if (o.dim != 2 && o.dim != 3) throw UsageError("exact C_N^G is known only for dim 2 and 3");
            e = c_g_exact(o.dim);
        } else {
            throw UsageError("no closed form for the Bures constant; use --method quadrature");
        }
    } else if (o.method == "quadrature") {
        if (o.dim != 2 && o.dim != 3) throw UsageError("quadrature supports dim 2 and 3 only");
        e = m == MeasureKind::Bures ? c_bures_quadrature(o.dim) : c_quadrature(m, o.dim);
    } else {
        if (!g) throw UsageError("method '" + o.method + "' applies to the g measure only");
        if (o.method == "jensen") {
            e = c_g_jensen_bound(o.dim);
        } else if (o.method == "mc") {
            const MonteCarloConstant mc = c_g_monte_carlo(o.dim, o.count, plan);
            e = mc.estimate;
            extra = {{"mean_inverse_sqrt", mc.mean_inverse_sqrt},
                     {"mean_inverse_sqrt_std_error", mc.mean_inverse_sqrt_se},
                     {"discarded", mc.discarded},
                     {"unstable", mc.unstable},
                     {"seed", seed},
                     {"workers", common.workers}};
        } else if (o.method == "series") {
            if (o.moments != "mc" && o.moments != "closed") throw UsageError("--moments must be mc or closed");
            const MomentSource src = o.moments == "mc" ? MomentSource::MonteCarlo : MomentSource::ClosedForm;
            const SeriesEstimate s = c_g_series(o.dim, o.k_max, src, src == MomentSource::MonteCarlo ? o.count : 0, plan);
            e = s.estimate;
            extra = {{"k_max", o.k_max},
                     {"moment_source", o.moments},
                     {"inverse_partial_sums", s.inverse_partial_sums},
                     {"last_term", s.last_term}};
            if (src == MomentSource::MonteCarlo) {
                extra["samples"] = o.count;
                extra["seed"] = seed;
                extra["workers"] = common.workers;
            }
        } else {
            throw UsageError("unknown method '" + o.method + "'");
        }
    }

    if (common.format == "csv") {
        std::ostringstream s;
        s << "# schema_version=" << kSchemaVersion << "\n# command=estimate\n"
          << "measure,dim,method,kind,value,std_error,terms_or_samples\n"
          << measure_tag(e.measure) << ',' << e.dim << ',' << method_tag(e.method) << ',' << kind_of(e) << ','
          << num(e.value) << ',' << (e.std_error ? num(*e.std_error) : std::string()) << ',' << e.terms_or_samples
          << '\n';
        emit(s.str(), common, out);
        return kExitOk;
    }
    json j = {{"schema_version", kSchemaVersion},
              {"command", "estimate"},
              {"measure", measure_tag(e.measure)},
              {"dim", e.dim},
              {"method", method_tag(e.method)},
              {"kind", kind_of(e)},
              {"value", e.value},
              {"std_error", e.std_error ? json(*e.std_error) : json(nullptr)},
              {"terms_or_samples", e.terms_or_samples}};
    if (!extra.empty()) j["details"] = std::move(extra);
    emit(j.dump() + '\n', common, out);
    return kExitOk;
}

int cmd_grid(const GridOptions& o, const CommonOptions& common, std::ostream& out) {
    if (o.dim != 3) throw UsageError("grid is defined for dim 3 only");
    const MeasureKind m = measure_of(o.measure);
    const auto grid = density_grid_qutrit(o.resolution, m);
    if (common.format == "json") {
        json pts = json::array();
        for (const GridPoint& p : grid) {
            pts.push_back({{"lambda_1", p.lambda1},
                           {"lambda_2", p.lambda2},
                           {"density", p.density},
                           {"weight", p.weight},
                           {"singular", p.singular}});
        }
        json j = {{"schema_version", kSchemaVersion},
                  {"command", "grid"},
                  {"measure", measure_tag(m)},
                  {"dim", 3},
                  {"resolution", o.resolution},
                  {"points", std::move(pts)}};
        emit(j.dump() + '\n', common, out);
        return kExitOk;
    }
    std::ostringstream s;
    s << "# schema_version=" << kSchemaVersion << "\n# command=grid\n# measure=" << measure_tag(m)
      << "\n# dim=3\n# resolution=" << o.resolution << "\nlambda_1,lambda_2,density,weight,singular\n";
    for (const GridPoint& p : grid) {
        s << num(p.lambda1) << ',' << num(p.lambda2) << ',' << num(p.density) << ',' << num(p.weight) << ','
          << (p.singular ? 1 : 0) << '\n';
    }
    emit(s.str(), common, out);
    return kExitOk;
}

int cmd_verify(const VerifyCliOptions& o, const CommonOptions& common, std::ostream& out) {
    if (!is_known_suite(o.suite)) throw UsageError("unknown suite '" + o.suite + "'");
    VerifyOptions opt;
    opt.seed = resolve_seed(common.seed);
    opt.shards = common.workers;
    opt.dim = o.dim;
    const auto results = run_suite(o.suite, opt);

    std::size_t passed = 0;
    json checks = json::array();
    std::ostringstream human;
    for (const CheckResult& r : results) {
        if (r.passed) ++passed;
        human << (r.passed ? "PASS " : "FAIL ") << r.id << ": " << r.description << '\n'
              << "     " << r.detail << '\n';
        json metrics = json::object();
        for (const auto& [k, v] : r.metrics) metrics[k] = v;
        checks.push_back({{"id", r.id},
                          {"description", r.description},
                          {"passed", r.passed},
                          {"detail", r.detail},
                          {"metrics", std::move(metrics)}});
    }
    human << passed << '/' << results.size() << " checks passed\n";
    for (const CheckResult& r : results) {
        if (!r.passed) human << "failed: " << r.id << '\n';
    }
    json report = {{"schema_version", kSchemaVersion},
                   {"command", "verify"},
                   {"suite", o.suite},
                   {"seed", opt.seed},
                   {"workers", opt.shards},
                   {"passed", passed == results.size()},
                   {"checks", std::move(checks)}};
    if (o.dim) report["dim"] = *o.dim;

    if (!common.out_path.empty()) {
        emit(report.dump(2) + '\n', common, out);
        out << human.str();
    } else if (common.format == "json") {
        out << report.dump(2) << '\n';
    } else {
        out << human.str();
    }
    return passed == results.size() ? kExitOk : kExitVerificationFailed;
}

void add_common(CLI::App* cmd, CommonOptions& c, const std::string& default_format,
                std::vector<std::string> formats) {
    c.format = default_format;
    cmd->add_option("--seed", c.seed, "Master seed (falls back to $SUPERFID_SEED, then 0)");
    cmd->add_option("--workers", c.workers, "Number of shards (one RNG stream each)")
        ->check(CLI::Range(1, 4096));
    cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember(std::move(formats)));
    cmd->add_option("--out", c.out_path, "Output path (default: stdout)");
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random density matrices under the superfidelity-induced measure", "superfid"};
    app.require_subcommand(1);

    CommonOptions common;
    SampleOptions sample;
    EstimateOptions estimate;
    GridOptions grid;
    VerifyCliOptions verify;

    const auto measures = CLI::IsMember({"hs", "bures", "g"});

    CLI::App* s = app.add_subcommand("sample", "Draw random states and write their spectra");
    s->add_option("--measure", sample.measure, "hs, bures or g")->check(measures);
    s->add_option("--dim", sample.dim, "Matrix size N")->check(CLI::Range(2, 64));
    s->add_option("--count", sample.count, "Number of states")->check(CLI::PositiveNumber);
    s->add_flag("--full-matrix", sample.full_matrix, "Append matrix entries (row-major re,im pairs)");
    s->add_option("--max-proposals", sample.max_proposals, "Rejection budget per accepted state")
        ->check(CLI::PositiveNumber);
    add_common(s, common, "csv", {"csv", "json"});

    CLI::App* e = app.add_subcommand("estimate", "Normalization constant of an eigenvalue density");
    e->add_option("--measure", estimate.measure, "hs, bures or g")->check(measures);
    e->add_option("--dim", estimate.dim, "Matrix size N")->check(CLI::Range(2, 64));
    e->add_option("--method", estimate.method, "exact, jensen, series, mc or quadrature")
        ->check(CLI::IsMember({"exact", "jensen", "series", "mc", "quadrature"}));
    e->add_option("--count", estimate.count, "Monte-Carlo samples (mc, series)")->check(CLI::Range(1000ULL, 1ULL << 40));
    e->add_option("--k-max", estimate.k_max, "Series truncation order")->check(CLI::Range(1, 1000));
    e->add_option("--moments", estimate.moments, "Series moment source: mc or closed")
        ->check(CLI::IsMember({"mc", "closed"}));
    add_common(e, common, "json", {"csv", "json"});

    CLI::App* gcmd = app.add_subcommand("grid", "Qutrit eigenvalue density on a triangular grid");
    gcmd->add_option("--measure", grid.measure, "g, bures or hs")->check(measures);
    gcmd->add_option("--dim", grid.dim, "Must be 3");
    gcmd->add_option("--resolution", grid.resolution, "Cells per simplex edge")->check(CLI::Range(2, 5000));
    add_common(gcmd, common, "csv", {"csv", "json"});

    CLI::App* v = app.add_subcommand("verify", "Run a verification suite");
    v->add_option("suite", verify.suite, "metric, density, sampler, purity or all")->required();
    v->add_option("--dim", verify.dim, "Restrict dimension-dependent checks")->check(CLI::Range(2, 64));
    add_common(v, common, "text", {"text", "json"});

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitUsage;
    }

    try {
        if (s->parsed()) return cmd_sample(sample, common, out, err);
        if (e->parsed()) return cmd_estimate(estimate, common, out);
        if (gcmd->parsed()) return cmd_grid(grid, common, out);
        if (v->parsed()) return cmd_verify(verify, common, out);
    } catch (const UsageError& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitUsage;
    } catch (const BudgetExhausted& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitBudgetExhausted;
    } catch (const InvalidDimension& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitUsage;
    } catch (const UnsupportedDimension& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitUsage;
    } catch (const UnvalidatedMomentSource& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitVerificationFailed;
    }
    return kExitUsage;
}

}  // namespace superfid
