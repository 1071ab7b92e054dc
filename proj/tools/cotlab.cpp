// cotlab: command-line front end for the cotangent-sum laboratory.
//
// Subcommands write one table to stdout (or --out) as CSV or JSON; status and
// diagnostic lines go to stderr so pipelines stay clean. All sampling is
// deterministic in (seed, samples, caps) and independent of --workers.

#include "cotlab/cotangent.hpp"
#include "cotlab/contfrac.hpp"
#include "cotlab/csvio.hpp"
#include "cotlab/distribution.hpp"
#include "cotlab/divisor.hpp"
#include "cotlab/errors.hpp"
#include "cotlab/gseries.hpp"
#include "cotlab/moments.hpp"
#include "cotlab/parallel.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace cotlab;

struct lab_config {
    std::uint64_t seed = 42;
    std::uint64_t samples = 100000;
    std::uint64_t N = 1000000;
    std::uint64_t M = 1000000;
    std::string normalization_name = "two-pi";
    std::string cache_dir = "cache";
    unsigned workers = 1;
    std::string format = "csv";
    std::string out_path;
    std::string g_method_name = "direct";

    normalization norm() const {
        if (normalization_name == "two-pi") return normalization::two_pi;
        if (normalization_name == "pi") return normalization::pi;
        throw domain_error("unknown normalization '" + normalization_name + "'");
    }
    g_method method() const {
        if (g_method_name == "direct") return g_method::direct;
        if (g_method_name == "fourier") return g_method::fourier;
        if (g_method_name == "cross") return g_method::cross_checked;
        throw domain_error("unknown g method '" + g_method_name + "'");
    }
};

void emit(const table_writer& table, const lab_config& cfg) {
    std::string text = cfg.format == "json" ? table.to_json() : table.to_csv();
    if (cfg.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw domain_error("cannot open output file '" + cfg.out_path + "'");
    out << text;
}

void status(const std::string& line) { std::cerr << "[cotlab] " << line << "\n"; }

// ------------------------------------------------------------ divisor cache

divisor_table divisor_with_cache(std::uint32_t limit, const lab_config& cfg) {
    namespace fs = std::filesystem;
    fs::path dir(cfg.cache_dir);
    fs::path file = dir / ("divisor-" + std::to_string(limit) + ".u32le");
    if (auto cached = load_divisor_table(file.string())) {
        status("divisor cache hit: " + file.string());
        return std::move(*cached);
    }
    if (fs::exists(file))
        status("divisor cache corrupt, rebuilding: " + file.string());
    else
        status("divisor cache miss, sieving to " + std::to_string(limit));
    divisor_table t = divisor_sieve(limit);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!ec && save_divisor_table(t, file.string()))
        status("divisor cache written: " + file.string());
    return t;
}

// --------------------------------------------------------- g-sample cache
//
// layout: magic "CGSAMP1\0" | u64 seed samples N M | u8 method | u64 flagged
//         | samples f64 sorted values | u64 fnv1a checksum of everything above

constexpr char g_cache_magic[8] = {'C', 'G', 'S', 'A', 'M', 'P', '1', '\0'};

std::uint64_t fnv1a(const unsigned char* p, std::size_t n) {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

std::string g_cache_path(const lab_config& cfg) {
    std::ostringstream name;
    name << "gsamp-" << cfg.seed << "-" << cfg.samples << "-" << cfg.N << "-"
         << cfg.M << "-" << cfg.g_method_name << ".bin";
    return (std::filesystem::path(cfg.cache_dir) / name.str()).string();
}

std::optional<sample_f_report> load_g_cache(const lab_config& cfg) {
    std::ifstream in(g_cache_path(cfg), std::ios::binary);
    if (!in) return std::nullopt;
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    std::size_t want = 8 + 4 * 8 + 1 + 8 + cfg.samples * 8 + 8;
    if (bytes.size() != want) return std::nullopt;
    if (fnv1a(bytes.data(), bytes.size() - 8) !=
        *reinterpret_cast<const std::uint64_t*>(bytes.data() + bytes.size() - 8))
        return std::nullopt;
    if (!std::equal(g_cache_magic, g_cache_magic + 8, bytes.data())) return std::nullopt;
    const unsigned char* p = bytes.data() + 8;
    auto rd64 = [&]() {
        std::uint64_t v;
        std::memcpy(&v, p, 8);
        p += 8;
        return v;
    };
    if (rd64() != cfg.seed || rd64() != cfg.samples || rd64() != cfg.N ||
        rd64() != cfg.M)
        return std::nullopt;
    std::uint8_t method = *p++;
    if (method != static_cast<std::uint8_t>(cfg.method())) return std::nullopt;
    sample_f_report rep;
    rep.flagged = rd64();
    rep.values.resize(cfg.samples);
    std::memcpy(rep.values.data(), p, cfg.samples * 8);
    rep.warning =
        static_cast<double>(rep.flagged) > 0.01 * static_cast<double>(cfg.samples);
    return rep;
}

void save_g_cache(const sample_f_report& rep, const lab_config& cfg) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(fs::path(cfg.cache_dir), ec);
    std::vector<unsigned char> bytes;
    auto put = [&](const void* src, std::size_t n) {
        const auto* c = static_cast<const unsigned char*>(src);
        bytes.insert(bytes.end(), c, c + n);
    };
    put(g_cache_magic, 8);
    std::uint64_t hdr[4] = {cfg.seed, cfg.samples, cfg.N, cfg.M};
    put(hdr, sizeof hdr);
    auto method = static_cast<std::uint8_t>(cfg.method());
    put(&method, 1);
    put(&rep.flagged, 8);
    put(rep.values.data(), rep.values.size() * 8);
    std::uint64_t sum = fnv1a(bytes.data(), bytes.size());
    put(&sum, 8);
    std::ofstream out(g_cache_path(cfg), std::ios::binary);
    if (!out) return;
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

g_evaluator make_evaluator(const lab_config& cfg, const divisor_table* table) {
    g_evaluator ev;
    ev.method = cfg.method();
    ev.N = cfg.N;
    ev.M = cfg.M;
    ev.table = table;
    return ev;
}

// fetch (or compute and cache) the sorted g sample set at the active config
sample_f_report g_samples_cached(const lab_config& cfg, const divisor_table* table,
                                 const parallel_map& pm) {
    if (auto cached = load_g_cache(cfg)) {
        status("g-sample cache hit: " + g_cache_path(cfg));
        return std::move(*cached);
    }
    if (std::filesystem::exists(g_cache_path(cfg)))
        status("g-sample cache corrupt or stale, resampling: " + g_cache_path(cfg));
    else
        status("g-sample cache miss, sampling " + std::to_string(cfg.samples) +
               " values");
    sample_f_report rep = sample_F(cfg.samples, cfg.seed, make_evaluator(cfg, table), pm);
    save_g_cache(rep, cfg);
    return rep;
}

const divisor_table* maybe_table(const lab_config& cfg, divisor_table& storage) {
    if (cfg.method() == g_method::direct) return nullptr;
    storage = divisor_with_cache(static_cast<std::uint32_t>(2 * cfg.M), cfg);
    return &storage;
}

// --------------------------------------------------------------- cf parsing

struct cf_input {
    bool rational = false;
    std::int64_t num = 0, den = 0;
    std::optional<prec_real> real;
};

cf_input parse_cf_x(const std::string& s, int precBits) {
    int prec = precBits > 0 ? precBits : 256;
    cf_input in;
    if (s == "golden") {
        in.real = prec_real::golden(prec);
        return in;
    }
    if (s.rfind("sqrt:", 0) == 0) {
        // sqrt:D[:P[:Q]] -> (sqrt(D) + P)/Q
        std::int64_t D = 0, P = 0, Q = 1;
        std::string rest = s.substr(5);
        std::replace(rest.begin(), rest.end(), ':', ' ');
        std::istringstream iss(rest);
        if (!(iss >> D)) throw domain_error("cf: cannot parse surd argument '" + s + "'");
        iss >> P >> Q;
        in.real = prec_real::surd(D, P, Q, prec);
        return in;
    }
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        in.rational = true;
        in.num = std::stoll(s.substr(0, slash));
        in.den = std::stoll(s.substr(slash + 1));
        return in;
    }
    // plain decimal literal: exact rational digits/10^k so the expansion can
    // use integer arithmetic and terminate exactly
    auto dot = s.find('.');
    std::string digits = dot == std::string::npos ? s : s.substr(0, dot) + s.substr(dot + 1);
    if (digits.empty() || digits.size() > 18 ||
        digits.find_first_not_of("0123456789") != std::string::npos)
        throw domain_error("cf: cannot parse x value '" + s + "'");
    std::int64_t num = std::stoll(digits);
    std::int64_t den = 1;
    if (dot != std::string::npos)
        for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
    in.rational = true;
    in.num = num;
    in.den = den;
    return in;
}

// ------------------------------------------------------------- subcommands

int run_c0(const lab_config& cfg, std::int64_t b, double a0, double a1) {
    parallel_map pm(cfg.workers);
    window w = make_window(b, a0, a1);
    std::vector<scaled_c0> rows = c0_window_scaled(w, pm);
    table_writer t({"b", "r", "c0", "c0_over_b"});
    for (const auto& r : rows)
        t.add_row({cell_int(b), cell_int(r.f.r), cell_real(r.value), cell_real(r.scaled)});
    emit(t, cfg);
    status("c0: " + std::to_string(rows.size()) + " window residues at b=" +
           std::to_string(b));
    return 0;
}

int run_g(const lab_config& cfg, double alpha, bool fejer) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw domain_error("g: alpha must lie in (0,1)");
    divisor_table storage{0, {}};
    const divisor_table* table = maybe_table(cfg, storage);
    g_evaluator ev = make_evaluator(cfg, table);
    ev.fejer = fejer;
    g_estimate est = g_eval(alpha, ev);
    table_writer t({"alpha", "value", "spread", "method", "N", "M", "seed"});
    t.add_row({cell_real(alpha), cell_real(est.value), cell_real(est.spread),
               cell_text(cfg.g_method_name), cell_uint(cfg.N), cell_uint(cfg.M),
               cell_uint(cfg.seed)});
    emit(t, cfg);
    if (est.flagged)
        status("g: spread " + fmt17(est.spread) + " exceeds tolerance " +
               fmt17(ev.tolerance) + " (estimate flagged, not fatal)");
    return 0;
}

int run_cf(const lab_config& cfg, const std::string& x, int depth,
           std::int64_t qbound, int precBits) {
    cf_input in = parse_cf_x(x, precBits);
    cf_expansion cf = in.rational
                          ? cf_expand(in.num, in.den, depth, qbound)
                          : cf_expand(*in.real, depth, qbound, precBits);
    table_writer t({"r", "a", "p", "q", "c"});
    for (int r = 1; r <= cf.depth(); ++r)
        t.add_row({cell_int(r), cell_int(cf.a_at(r)), cell_int(cf.p_at(r)),
                   cell_int(cf.q_at(r)), cell_real(c_alpha_r(cf, r - 1))});
    emit(t, cfg);
    const char* why = cf.reason == cf_expansion::stop_reason::exact     ? "exact termination"
                      : cf.reason == cf_expansion::stop_reason::qbound ? "qBound reached"
                                                                       : "depth reached";
    status("cf: depth " + std::to_string(cf.depth()) + ", stop: " + why);
    return 0;
}

int run_moments(const lab_config& cfg, std::vector<int> ks, const std::string& estimator,
                std::int64_t b, double a0, double a1) {
    parallel_map pm(cfg.workers);
    if (ks.empty()) ks = {1, 2, 3, 4, 5, 6};
    table_writer t({"k", "method", "normalization", "value", "stderr", "n", "seed"});
    if (estimator == "cotangent") {
        window w = make_window(b, a0, a1);
        for (int k : ks) {
            moment_estimate m = hk_from_cotangent(b, k, w, pm);
            t.add_row({cell_int(k), cell_text("cotangent"), cell_text("none"),
                       cell_real(m.value), cell_real(m.stderr_), cell_uint(m.n),
                       cell_uint(m.seed)});
        }
        emit(t, cfg);
        status("moments: cotangent estimator at b=" + std::to_string(b));
        return 0;
    }
    divisor_table storage{0, {}};
    const divisor_table* table = maybe_table(cfg, storage);
    g_evaluator ev = make_evaluator(cfg, table);
    std::vector<moment_estimate> rows;
    if (estimator == "quadrature")
        rows = hk_quadrature_batch(ks, cfg.samples, cfg.seed, ev, cfg.norm(), pm);
    else if (estimator == "absolute")
        rows = abs_moment_batch(ks, cfg.samples, cfg.seed, ev, pm);
    else
        throw domain_error("moments: unknown estimator '" + estimator + "'");
    for (const auto& m : rows)
        t.add_row({cell_int(m.k), cell_text(to_string(m.method)),
                   cell_text(m.norm_applicable ? to_string(m.norm) : "none"),
                   cell_real(m.value), cell_real(m.stderr_), cell_uint(m.n),
                   cell_uint(m.seed)});
    emit(t, cfg);
    status("moments: " + std::to_string(rows.size()) + " rows, estimator " + estimator);
    return 0;
}

int run_radius(const lab_config& cfg, const std::string& input) {
    csv_table in = read_csv(input);
    auto col = [&](const std::string& name) {
        for (std::size_t j = 0; j < in.header.size(); ++j)
            if (in.header[j] == name) return j;
        throw domain_error("radius: input lacks column '" + name + "'");
    };
    std::size_t ck = col("k"), cm = col("method"), cn = col("normalization"),
                cv = col("value");
    std::vector<moment_estimate> moments;
    for (const auto& row : in.rows) {
        moment_estimate m;
        m.k = std::stoi(row[ck]);
        const std::string& meth = row[cm];
        m.method = meth == "cotangent"  ? moment_method::cotangent
                   : meth == "absolute" ? moment_method::absolute
                                        : moment_method::quadrature;
        if (row[cn] == "pi") {
            m.norm = normalization::pi;
        } else if (row[cn] == "two-pi") {
            m.norm = normalization::two_pi;
        } else {
            m.norm_applicable = false;
        }
        if (m.method != moment_method::quadrature) m.norm_applicable = false;
        m.value = std::stod(row[cv]);
        moments.push_back(m);
    }
    radius_report rep = radius_diagnostics(moments);
    table_writer t({"k", "Hk", "rho_k"});
    for (const auto& r : rep.rows)
        t.add_row({cell_int(r.k), cell_real(r.Hk), cell_real(r.rho_k)});
    emit(t, cfg);
    std::ostringstream s;
    s << "radius: cFit=" << (rep.has_cfit ? fmt17(rep.cFit) : std::string("n/a"))
      << " limsup_flag=" << (rep.limsup_flag ? "yes" : "no")
      << " envelope_flag=" << (rep.envelope_flag ? "yes" : "no")
      << " tolerance=" << fmt17(rep.tolerance);
    status(s.str());
    return 0;
}

int run_tail(const lab_config& cfg, double tmin, double tmax, int tcount) {
    parallel_map pm(cfg.workers);
    if (tcount < 1) throw domain_error("tail: tcount >= 1 required");
    divisor_table storage{0, {}};
    const divisor_table* table = maybe_table(cfg, storage);
    sample_f_report samples = g_samples_cached(cfg, table, pm);
    empirical_cdf cdf(samples.values);
    std::vector<double> ts;
    for (int i = 0; i < tcount; ++i)
        ts.push_back(tcount == 1 ? tmin
                                 : tmin + i * (tmax - tmin) / (tcount - 1));
    tail_fit fit = tail_measure(ts, cdf);
    table_writer t({"t", "measure", "stderr", "log_measure"});
    for (std::size_t i = 0; i < fit.t.size(); ++i)
        t.add_row({cell_real(fit.t[i]), cell_real(fit.measure[i]),
                   cell_real(fit.stderr_[i]), cell_real(fit.log_measure[i])});
    emit(t, cfg);
    if (fit.fit_ok)
        status("tail: slope=" + fmt17(fit.slope) + " intercept=" + fmt17(fit.intercept));
    else
        status("tail: exponential fit unavailable (fewer than 2 well-hit thresholds)");
    if (samples.warning) status("tail: more than 1% of g evaluations were flagged");
    return 0;
}

int run_equidist(const lab_config& cfg, std::int64_t b, double a0, double a1, int cells) {
    parallel_map pm(cfg.workers);
    if (cells < 1) throw domain_error("equidist: cells >= 1 required");
    divisor_table storage{0, {}};
    const divisor_table* table = maybe_table(cfg, storage);
    sample_f_report samples = g_samples_cached(cfg, table, pm);
    // the window law of c0(r/b)/b converges to the law of g/pi, so the
    // reference CDF is the g sample set scaled by 1/pi
    empirical_cdf ref = empirical_cdf(samples.values).scaled(1.0 / 3.14159265358979323846);
    std::vector<std::pair<double, double>> grid;
    double prev = -std::numeric_limits<double>::infinity();
    for (int j = 1; j < cells; ++j) {
        double edge = ref.quantile(static_cast<double>(j) / cells);
        grid.emplace_back(prev, edge);
        prev = edge;
    }
    grid.emplace_back(prev, std::numeric_limits<double>::infinity());
    window w = make_window(b, a0, a1);
    equidist_report rep = equidist_experiment(w, grid, ref, pm);
    table_writer t({"b", "a0", "a1", "alpha", "beta", "count", "phi_b", "lhs",
                    "rhs", "abs_err"});
    for (const auto& c : rep.cells)
        t.add_row({cell_int(rep.b), cell_real(rep.a0), cell_real(rep.a1),
                   cell_real(c.alpha), cell_real(c.beta), cell_uint(c.count),
                   cell_uint(rep.phi_b), cell_real(c.lhs), cell_real(c.rhs),
                   cell_real(c.abs_err)});
    emit(t, cfg);
    status("equidist: maxAbsErr=" + fmt17(rep.max_abs_err) + " ks=" + fmt17(rep.ks) +
           " window_count=" + std::to_string(rep.window_count));
    if (samples.warning) status("equidist: more than 1% of g evaluations were flagged");
    return 0;
}

int run_decompose(const lab_config& cfg, int k, double delta) {
    parallel_map pm(cfg.workers);
    divisor_table storage{0, {}};
    const divisor_table* table = maybe_table(cfg, storage);
    decomposition_report rep =
        decomposition_bounds(k, delta, cfg.samples, cfg.seed,
                             make_evaluator(cfg, table), pm);
    table_writer t({"k", "delta", "n_interval", "n_full", "min_g1", "bound_g1",
                    "max_abs_g2", "bound_g2", "frac_g3", "g3_threshold",
                    "frac_bound_measure", "frac_bound_half", "identity_max_err",
                    "flagged", "seed"});
    t.add_row({cell_int(rep.k), cell_real(rep.delta), cell_uint(rep.n_interval),
               cell_uint(rep.n_full), cell_real(rep.min_g1), cell_real(rep.bound_g1),
               cell_real(rep.max_abs_g2), cell_real(rep.bound_g2),
               cell_real(rep.frac_g3), cell_real(rep.g3_threshold),
               cell_real(rep.frac_bound_measure), cell_real(rep.frac_bound_half),
               cell_real(rep.identity_max_err), cell_uint(rep.flagged),
               cell_uint(rep.seed)});
    emit(t, cfg);
    status("decompose: min_g1=" + fmt17(rep.min_g1) + " max|g2|=" +
           fmt17(rep.max_abs_g2) + " frac_g3=" + fmt17(rep.frac_g3));
    return 0;
}

int run_emeasure(const lab_config& cfg, std::vector<double> zs, int rmax, bool with_inf) {
    parallel_map pm(cfg.workers);
    if (zs.empty()) zs = {2, 3, 4, 6, 8, 12};
    if (rmax < 0) throw domain_error("emeasure: rmax >= 0 required");
    w_sequence ws;
    table_writer t({"z", "r", "estimate", "stderr", "bound", "n_samples", "seed"});
    for (double z : zs) {
        for (int r = 0; r <= rmax; ++r) {
            mc_estimate e = measure_E_mc(z, r, cfg.samples, cfg.seed, ws, pm);
            t.add_row({cell_real(z), cell_int(r), cell_real(e.estimate),
                       cell_real(e.stderr_), cell_real(e_measure_bound(z, r, ws)),
                       cell_uint(e.n), cell_uint(e.seed)});
        }
        if (with_inf) {
            mc_estimate e = measure_E_inf_mc(z, cfg.samples, cfg.seed, ws, pm);
            t.add_row({cell_real(z), cell_int(-1), cell_real(e.estimate),
                       cell_real(e.stderr_), cell_real(e_measure_bound(z, -1, ws)),
                       cell_uint(e.n), cell_uint(e.seed)});
        }
    }
    emit(t, cfg);
    status("emeasure: " + std::to_string(zs.size()) + " thresholds, r <= " +
           std::to_string(rmax) + (with_inf ? " plus the r=-1 (infinity) row" : ""));
    return 0;
}

int run_scatter(const lab_config& cfg, int cfDepth) {
    parallel_map pm(cfg.workers);
    divisor_table storage{0, {}};
    const divisor_table* table = maybe_table(cfg, storage);
    scatter_report rep = g_vs_c_scatter(cfg.samples, cfg.seed,
                                        make_evaluator(cfg, table), cfDepth, pm);
    table_writer t({"c_trunc", "abs_g"});
    for (const auto& p : rep.points)
        t.add_row({cell_real(p.c_trunc), cell_real(p.abs_g)});
    emit(t, cfg);
    status("scatter: envelope c2=" + fmt17(rep.c2) + " c3=" + fmt17(rep.c3) +
           " dropped=" + std::to_string(rep.dropped));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    lab_config cfg;
    CLI::App app{"numerical laboratory for cotangent sums, the sawtooth series g, "
                 "continued fractions and the limiting law of c0(r/b)/b"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read defaults from a config file");
    app.add_option("--seed", cfg.seed, "root RNG seed")->capture_default_str();
    app.add_option("--samples", cfg.samples, "Monte Carlo sample count")
        ->capture_default_str();
    app.add_option("--N", cfg.N, "direct series cap")->capture_default_str();
    app.add_option("--M", cfg.M, "Fourier series cap")->capture_default_str();
    app.add_option("--normalization", cfg.normalization_name,
                   "moment normalization: two-pi or pi")
        ->check(CLI::IsMember({"two-pi", "pi"}))
        ->capture_default_str();
    app.add_option("--cache-dir", cfg.cache_dir, "cache directory")
        ->envname("COTLAB_CACHE")
        ->capture_default_str();
    app.add_option("--workers", cfg.workers, "worker threads (results identical)")
        ->capture_default_str();
    app.add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--out", cfg.out_path, "write the table to this file");
    app.add_option("--g-method", cfg.g_method_name,
                   "g evaluator: direct, fourier or cross")
        ->check(CLI::IsMember({"direct", "fourier", "cross"}))
        ->capture_default_str();

    // c0
    auto* sc0 = app.add_subcommand("c0", "scaled cotangent sums over a coprime window");
    sc0->fallthrough();
    std::int64_t c0_b = 0;
    double c0_a0 = 0.51, c0_a1 = 0.99;
    sc0->add_option("--b", c0_b, "denominator")->required();
    sc0->add_option("--a0", c0_a0, "window lower fraction")->capture_default_str();
    sc0->add_option("--a1", c0_a1, "window upper fraction")->capture_default_str();

    // g
    auto* sg = app.add_subcommand("g", "evaluate the sawtooth series g(alpha)");
    sg->fallthrough();
    double g_alpha = 0.0;
    bool g_fejer = false;
    sg->add_option("--alpha", g_alpha, "evaluation point in (0,1)")->required();
    sg->add_flag("--fejer", g_fejer, "apply Fejer weights to the Fourier sum");

    // cf
    auto* scf = app.add_subcommand("cf", "continued fraction expansion and c(alpha,r)");
    scf->fallthrough();
    std::string cf_x;
    int cf_depth = 32, cf_prec = 0;
    std::int64_t cf_qbound = static_cast<std::int64_t>(1) << 62;
    scf->add_option("--x", cf_x, "p/q, decimal, golden, or sqrt:D[:P[:Q]]")->required();
    scf->add_option("--depth", cf_depth, "maximum quotients")->capture_default_str();
    scf->add_option("--qbound", cf_qbound, "stop once q_r exceeds this")
        ->capture_default_str();
    scf->add_option("--precision-bits", cf_prec,
                    "working precision override (0 = derived from qbound)")
        ->capture_default_str();

    // moments
    auto* smo = app.add_subcommand("moments", "moment estimates H_k or E|g|^L");
    smo->fallthrough();
    std::vector<int> mo_ks;
    std::string mo_estimator = "quadrature";
    std::int64_t mo_b = 10007;
    double mo_a0 = 0.51, mo_a1 = 0.99;
    smo->add_option("--k", mo_ks, "moment indices (L for the absolute estimator)");
    smo->add_option("--estimator", mo_estimator, "quadrature, cotangent or absolute")
        ->check(CLI::IsMember({"quadrature", "cotangent", "absolute"}))
        ->capture_default_str();
    smo->add_option("--b", mo_b, "denominator for the cotangent estimator")
        ->capture_default_str();
    smo->add_option("--a0", mo_a0, "window lower fraction")->capture_default_str();
    smo->add_option("--a1", mo_a1, "window upper fraction")->capture_default_str();

    // radius
    auto* sra = app.add_subcommand("radius", "radius diagnostics from a moments table");
    sra->fallthrough();
    std::string ra_input;
    sra->add_option("--input", ra_input, "moments CSV produced by the moments subcommand")
        ->required();

    // tail
    auto* sta = app.add_subcommand("tail", "tail measure of |g| with exponential fit");
    sta->fallthrough();
    double ta_tmin = 1.0, ta_tmax = 8.0;
    int ta_tcount = 8;
    sta->add_option("--tmin", ta_tmin, "first threshold")->capture_default_str();
    sta->add_option("--tmax", ta_tmax, "last threshold")->capture_default_str();
    sta->add_option("--tcount", ta_tcount, "threshold count")->capture_default_str();

    // equidist
    auto* seq = app.add_subcommand("equidist",
                                   "window law of c0(r/b)/b against the sampled limit");
    seq->fallthrough();
    std::int64_t eq_b = 0;
    double eq_a0 = 0.51, eq_a1 = 0.99;
    int eq_cells = 8;
    seq->add_option("--b", eq_b, "denominator")->required();
    seq->add_option("--a0", eq_a0, "window lower fraction")->capture_default_str();
    seq->add_option("--a1", eq_a1, "window upper fraction")->capture_default_str();
    seq->add_option("--cells", eq_cells, "quantile cells")->capture_default_str();

    // decompose
    auto* sde = app.add_subcommand("decompose", "three-part decomposition bounds of g");
    sde->fallthrough();
    int de_k = 2;
    double de_delta = 0.05;
    sde->add_option("--k", de_k, "decomposition index")->capture_default_str();
    sde->add_option("--delta", de_delta, "decomposition delta")->capture_default_str();

    // emeasure
    auto* sem = app.add_subcommand("emeasure", "Monte Carlo measure of E(z,r)");
    sem->fallthrough();
    std::vector<double> em_z;
    int em_rmax = 6;
    bool em_inf = false;
    sem->add_option("--z-grid", em_z, "z thresholds (default 2 3 4 6 8 12)");
    sem->add_option("--rmax", em_rmax, "largest r")->capture_default_str();
    sem->add_flag("--inf", em_inf, "append the r=-1 row for E(z,+infinity)");

    // scatter
    auto* ssc = app.add_subcommand("scatter", "|g| against the truncated c(alpha,R)");
    ssc->fallthrough();
    int sc_depth = 64;
    ssc->add_option("--cf-depth", sc_depth, "expansion depth for c")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(sc0)) return run_c0(cfg, c0_b, c0_a0, c0_a1);
        if (app.got_subcommand(sg)) return run_g(cfg, g_alpha, g_fejer);
        if (app.got_subcommand(scf)) return run_cf(cfg, cf_x, cf_depth, cf_qbound, cf_prec);
        if (app.got_subcommand(smo))
            return run_moments(cfg, mo_ks, mo_estimator, mo_b, mo_a0, mo_a1);
        if (app.got_subcommand(sra)) return run_radius(cfg, ra_input);
        if (app.got_subcommand(sta)) return run_tail(cfg, ta_tmin, ta_tmax, ta_tcount);
        if (app.got_subcommand(seq)) return run_equidist(cfg, eq_b, eq_a0, eq_a1, eq_cells);
        if (app.got_subcommand(sde)) return run_decompose(cfg, de_k, de_delta);
        if (app.got_subcommand(sem)) return run_emeasure(cfg, em_z, em_rmax, em_inf);
        if (app.got_subcommand(ssc)) return run_scatter(cfg, sc_depth);
        std::cerr << "[cotlab] no subcommand selected\n";
        return 2;
    } catch (const domain_error& e) {
        std::cerr << "[cotlab] domain error: " << e.what() << "\n";
        return 3;
    } catch (const precision_error& e) {
        std::cerr << "[cotlab] precision error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "[cotlab] error: " << e.what() << "\n";
        return 1;
    }
}
