// latdiff -- visible lattice points and k-th-power-free integers:
// densities, autocorrelations and pure-point diffraction spectra, with
// both closed-form values and brute-force estimators.
//
// Every run prints a one-line JSON summary (schema 1) to stdout and
// optionally writes a machine-readable artifact (--out).  Outputs are
// byte-identical across runs for a fixed configuration, including the
// thread count.
//
// Exit codes: 0 success, 2 argument errors, 1 compute errors (a size or
// overflow ceiling was hit; the message names the ceiling).

#include <CLI11.hpp>
#include <json.hpp>

#include <complex>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "latdiff/diffraction.hpp"
#include "latdiff/errors.hpp"
#include "latdiff/io.hpp"
#include "latdiff/kfree.hpp"
#include "latdiff/lattice.hpp"
#include "latdiff/numtheory.hpp"
#include "latdiff/stats.hpp"

using json = nlohmann::ordered_json;
using namespace latdiff;

namespace {

int default_threads() {
    if (const char* env = std::getenv("LATDIFF_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 1;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    for (const auto& tok : split(s, ',')) {
        std::size_t used = 0;
        out.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument("bad number: '" + tok + "'");
    }
    return out;
}

std::vector<std::int64_t> parse_ints(const std::string& s) {
    std::vector<std::int64_t> out;
    for (const auto& tok : split(s, ',')) {
        std::size_t used = 0;
        out.push_back(std::stoll(tok, &used));
        if (used != tok.size()) throw std::invalid_argument("bad integer: '" + tok + "'");
    }
    return out;
}

// "I2" (identity), or matrix rows "a,b;c,d" whose columns are the basis
Lattice parse_lattice(const std::string& spec) {
    if (!spec.empty() && (spec[0] == 'I' || spec[0] == 'i')) {
        const int n = std::atoi(spec.c_str() + 1);
        if (n < 1 || n > Lattice::kMaxDim)
            throw std::invalid_argument("lattice: identity dimension must be in [1, 8]");
        return Lattice(n);
    }
    const auto rows = split(spec, ';');
    const int n = static_cast<int>(rows.size());
    std::vector<std::vector<double>> m;
    for (const auto& r : rows) {
        m.push_back(parse_doubles(r));
        if (static_cast<int>(m.back().size()) != n)
            throw std::invalid_argument("lattice: basis rows must form a square matrix");
    }
    std::vector<double> col_major(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) col_major[static_cast<std::size_t>(j) * n + i] = m[i][j];
    return Lattice(n, std::move(col_major));
}

// frequency coordinate, either an exact fraction "p/q" or a decimal
struct FreqCoord {
    double value = 0.0;
    bool rational = false;
    std::int64_t num = 0;
    std::int64_t den = 1;
};

FreqCoord parse_freq_coord(const std::string& tok) {
    FreqCoord c;
    const auto slash = tok.find('/');
    if (slash != std::string::npos) {
        c.num = std::stoll(tok.substr(0, slash));
        c.den = std::stoll(tok.substr(slash + 1));
        if (c.den <= 0) throw std::invalid_argument("frequency: denominator must be positive");
        c.rational = true;
        c.value = static_cast<double>(c.num) / static_cast<double>(c.den);
    } else {
        std::size_t used = 0;
        c.value = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("bad frequency: '" + tok + "'");
        // integers are exact rationals with denominator 1
        if (c.value == std::floor(c.value) && std::abs(c.value) < 1e15) {
            c.rational = true;
            c.num = static_cast<std::int64_t>(c.value);
            c.den = 1;
        }
    }
    return c;
}

// den(x) when every coordinate is an exact fraction, otherwise nullopt
std::optional<std::uint64_t> frequency_denominator(const std::vector<FreqCoord>& coords) {
    std::uint64_t q = 1;
    for (const auto& c : coords) {
        if (!c.rational) return std::nullopt;
        const std::uint64_t d = static_cast<std::uint64_t>(c.den) /
                                std::gcd(static_cast<std::uint64_t>(c.den),
                                         c.num == 0 ? static_cast<std::uint64_t>(c.den)
                                                    : static_cast<std::uint64_t>(std::abs(c.num)));
        q = std::lcm(q, d);
        if (q > (std::uint64_t(1) << 40))
            throw std::invalid_argument("frequency: denominator too large");
    }
    return q;
}

void write_artifact(const std::string& path, const std::string& bytes) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot open output file: " + path);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string table_csv(const std::vector<ConvergenceRow>& rows) {
    std::ostringstream os;
    write_convergence_csv(os, rows);
    return os.str();
}

json table_json(const std::vector<ConvergenceRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows)
        arr.push_back({{"R", r.radius},
                       {"count", r.count},
                       {"estimate", r.estimate},
                       {"theory", r.theory},
                       {"abs_error", r.abs_error}});
    return arr;
}

void emit_table(const std::string& out, const std::string& format,
                const std::vector<ConvergenceRow>& rows) {
    if (out.empty()) return;
    if (format == "json")
        write_artifact(out, table_json(rows).dump() + "\n");
    else
        write_artifact(out, table_csv(rows));
}

struct Options {
    // shared
    std::string lattice_spec = "I2";
    std::string set = "visible";
    int k = 2;
    std::vector<double> radii;
    std::string center_spec;
    std::string out;
    std::string format = "csv";
    int threads = default_threads();
    std::uint64_t prime_bound = kDefaultPrimeBound;
    // points
    std::string filter_spec = "all";
    // kfree interval
    std::int64_t lo = 0, hi = 0;
    // density region
    std::string region_spec = "ball";
    std::string halfwidth_spec;
    // autocorr / fourier
    std::string a_spec;
    std::string x_spec;
    bool one_sided = false;
    // peaks / map
    std::uint64_t q_max = 1;
    std::string window_spec;
    double intensity_floor = 0.0;
    double resolution = 64.0;
    double gamma = 1.0;
    // holes / gaps
    std::string config_spec;
    int block = 0;
    std::string moduli_spec;
    std::uint64_t gap_length = 1;
    // series
    std::string kind = "zeta";
    int s = 2;
};

std::vector<double> center_or_origin(const Options& opt, int dim) {
    if (opt.center_spec.empty()) return std::vector<double>(static_cast<std::size_t>(dim), 0.0);
    auto c = parse_doubles(opt.center_spec);
    if (static_cast<int>(c.size()) != dim)
        throw std::invalid_argument("--center dimension mismatch");
    return c;
}

PointFilter parse_filter(const std::string& spec) {
    if (spec == "all") return PointFilter::all();
    if (spec == "visible") return PointFilter::visible();
    if (spec.rfind("content=", 0) == 0) {
        const std::uint64_t m = std::stoull(spec.substr(8));
        if (m == 0) throw std::invalid_argument("--filter content=m needs m >= 1");
        return PointFilter::with_content(m);
    }
    throw std::invalid_argument("--filter must be all, visible or content=m");
}

double single_radius(const Options& opt) {
    if (opt.radii.size() != 1)
        throw std::invalid_argument("this command takes exactly one --radius");
    return opt.radii.front();
}

json run_points(const Options& opt) {
    const Lattice lat = parse_lattice(opt.lattice_spec);
    const double radius = single_radius(opt);
    const auto center = center_or_origin(opt, lat.dim());
    const auto filter = parse_filter(opt.filter_spec);
    const auto pts = points_in_ball(lat, center, radius, filter);
    std::ostringstream os;
    write_points_csv(os, lat.dim(), pts);
    write_artifact(opt.out, os.str());
    return {{"count", pts.size()}};
}

json run_kfree(const Options& opt) {
    const auto values = enumerate_kfree(opt.lo, opt.hi, opt.k);
    std::ostringstream os;
    write_integers_csv(os, values);
    write_artifact(opt.out, os.str());
    return {{"k", opt.k}, {"lo", opt.lo}, {"hi", opt.hi}, {"count", values.size()}};
}

json run_density(const Options& opt) {
    if (opt.region_spec != "box" && opt.radii.empty())
        throw std::invalid_argument("density needs at least one --radius");
    json result;
    if (opt.set == "kfree") {
        std::vector<ConvergenceRow> rows =
            density_table(PointSet::kfree(opt.k), opt.radii, opt.threads, opt.prime_bound);
        emit_table(opt.out, opt.format, rows);
        const auto& last = rows.back();
        result = {{"set", "kfree"},      {"k", opt.k},
                  {"radius", last.radius}, {"count", last.count},
                  {"estimate", last.estimate}, {"theory", last.theory},
                  {"abs_error", last.abs_error}};
    } else {
        const Lattice lat = parse_lattice(opt.lattice_spec);
        const PointSet set = opt.set == "all" ? PointSet::all(lat) : PointSet::visible(lat);
        if (opt.region_spec == "box") {
            if (opt.set != "visible")
                throw std::invalid_argument("box regions are supported for --set visible");
            if (opt.halfwidth_spec.empty())
                throw std::invalid_argument("--region box needs --halfwidths");
            const auto hw = parse_doubles(opt.halfwidth_spec);
            const auto region = Region::box(center_or_origin(opt, lat.dim()), hw);
            const auto est = density_visible(lat, region, opt.threads);
            const double theory = theoretical_density_visible(lat, opt.prime_bound);
            result = {{"set", opt.set},
                      {"region", "box"},
                      {"count", est.count},
                      {"estimate", est.density},
                      {"theory", theory},
                      {"abs_error", std::abs(est.density - theory)},
                      {"error_bound", est.error_bound}};
        } else {
            // off-center balls go through density_visible (tied density)
            const auto center = center_or_origin(opt, lat.dim());
            const bool origin = std::all_of(center.begin(), center.end(),
                                            [](double c) { return c == 0.0; });
            if (!origin) {
                if (opt.set != "visible")
                    throw std::invalid_argument("off-center balls are supported for --set visible");
                const auto region = Region::ball(center, single_radius(opt));
                const auto est = density_visible(lat, region, opt.threads);
                const double theory = theoretical_density_visible(lat, opt.prime_bound);
                result = {{"set", opt.set},
                          {"region", "ball"},
                          {"center", center},
                          {"count", est.count},
                          {"estimate", est.density},
                          {"theory", theory},
                          {"abs_error", std::abs(est.density - theory)},
                          {"error_bound", est.error_bound}};
            } else {
                auto rows = density_table(set, opt.radii, opt.threads, opt.prime_bound);
                emit_table(opt.out, opt.format, rows);
                const auto& last = rows.back();
                result = {{"set", opt.set},     {"radius", last.radius},
                          {"count", last.count}, {"estimate", last.estimate},
                          {"theory", last.theory}, {"abs_error", last.abs_error}};
            }
        }
    }
    return result;
}

json run_autocorr(const Options& opt) {
    if (opt.radii.empty()) throw std::invalid_argument("autocorr needs at least one --radius");
    if (opt.a_spec.empty()) throw std::invalid_argument("autocorr needs --a");
    const LatticeVector a = parse_ints(opt.a_spec);
    std::vector<ConvergenceRow> rows;
    std::optional<Lattice> lat;
    if (opt.set == "kfree") {
        rows = autocorr_table(PointSet::kfree(opt.k), a, opt.radii, opt.one_sided, opt.threads,
                              opt.prime_bound);
    } else {
        lat.emplace(parse_lattice(opt.lattice_spec));
        const PointSet set = opt.set == "all" ? PointSet::all(*lat) : PointSet::visible(*lat);
        rows = autocorr_table(set, a, opt.radii, opt.one_sided, opt.threads, opt.prime_bound);
    }
    emit_table(opt.out, opt.format, rows);
    const auto& last = rows.back();
    return {{"set", opt.set},        {"a", a},
            {"radius", last.radius}, {"pair_count", last.count},
            {"w_r", last.estimate},  {"w_theory", last.theory},
            {"abs_error", last.abs_error}};
}

json run_fourier(const Options& opt) {
    if (opt.radii.empty()) throw std::invalid_argument("fourier needs at least one --radius");
    if (opt.x_spec.empty()) throw std::invalid_argument("fourier needs --x");
    std::vector<FreqCoord> coords;
    for (const auto& tok : split(opt.x_spec, ',')) coords.push_back(parse_freq_coord(tok));
    std::vector<double> x;
    for (const auto& c : coords) x.push_back(c.value);

    double theory = 0.0;
    std::optional<std::uint64_t> den;
    std::optional<Lattice> lat;
    PointSet set = PointSet::kfree(2);
    if (opt.set == "kfree") {
        set = PointSet::kfree(opt.k);
        if (x.size() != 1) throw std::invalid_argument("k-free frequencies are scalars");
        den = frequency_denominator(coords);
        if (den) theory = intensity_kfree(opt.k, *den, opt.prime_bound);
    } else {
        lat.emplace(parse_lattice(opt.lattice_spec));
        set = opt.set == "all" ? PointSet::all(*lat) : PointSet::visible(*lat);
        den = frequency_denominator(coords);
        if (den && opt.set == "visible")
            theory = intensity_visible(*lat, *den, opt.prime_bound);
        if (den && opt.set == "all")
            theory = (*den == 1) ? lat->density() * lat->density() : 0.0;
    }

    auto rows = fourier_table(set, x, theory, opt.radii, opt.threads);
    emit_table(opt.out, opt.format, rows);
    const auto m = fourier_bohr(set, x, rows.back().radius, opt.threads);
    json result = {{"set", opt.set},
                   {"x", x},
                   {"radius", rows.back().radius},
                   {"re", m.real()},
                   {"im", m.imag()},
                   {"intensity", std::norm(m)},
                   {"theory", rows.back().theory},
                   {"abs_error", rows.back().abs_error}};
    if (den) result["den"] = *den;
    return result;
}

DualWindow parse_window(const Options& opt, int dim) {
    if (opt.window_spec.empty()) {
        std::vector<double> lo(static_cast<std::size_t>(dim), 0.0);
        std::vector<double> hi(static_cast<std::size_t>(dim), 1.0);
        return DualWindow::box(std::move(lo), std::move(hi));
    }
    const auto vals = parse_doubles(opt.window_spec);
    if (static_cast<int>(vals.size()) != 2 * dim)
        throw std::invalid_argument("--window needs lo_1..lo_n,hi_1..hi_n (2n numbers)");
    std::vector<double> lo(vals.begin(), vals.begin() + dim);
    std::vector<double> hi(vals.begin() + dim, vals.end());
    return DualWindow::box(std::move(lo), std::move(hi));
}

std::vector<WeightedPeak> peaks_for(const Options& opt, std::optional<Lattice>& lat_out,
                                    DualWindow& window_out) {
    if (opt.set == "kfree") {
        window_out = parse_window(opt, 1);
        return enumerate_peaks_kfree(opt.k, window_out.lo[0], window_out.hi[0], opt.q_max,
                                     opt.intensity_floor, opt.prime_bound);
    }
    lat_out.emplace(parse_lattice(opt.lattice_spec));
    window_out = parse_window(opt, lat_out->dim());
    return enumerate_peaks_visible(*lat_out, window_out, opt.q_max, opt.intensity_floor,
                                   opt.prime_bound);
}

json run_peaks(const Options& opt) {
    std::optional<Lattice> lat;
    DualWindow window = DualWindow::box({0.0}, {1.0});
    const auto peaks = peaks_for(opt, lat, window);
    const int dim = lat ? lat->dim() : 1;
    std::ostringstream os;
    write_peaks_csv(os, dim, peaks);
    write_artifact(opt.out, os.str());
    json result = {{"set", opt.set}, {"q_max", opt.q_max}, {"peak_count", peaks.size()}};
    if (!peaks.empty()) result["strongest_intensity"] = peaks.front().intensity;
    return result;
}

json run_map(const Options& opt) {
    std::optional<Lattice> lat;
    DualWindow window = DualWindow::box({0.0}, {1.0});
    const auto peaks = peaks_for(opt, lat, window);
    const auto img = raster_map(peaks, window, opt.resolution, opt.gamma);
    std::ostringstream comment;
    comment << "lattice=" << (opt.set == "kfree" ? ("F" + std::to_string(opt.k))
                                                 : opt.lattice_spec)
            << " qmax=" << opt.q_max << " gamma=" << opt.gamma;
    std::ostringstream os(std::ios::binary);
    write_pgm(os, img, comment.str());
    write_artifact(opt.out, os.str());
    return {{"set", opt.set},
            {"q_max", opt.q_max},
            {"peak_count", peaks.size()},
            {"width", img.width},
            {"height", img.height}};
}

json run_holes(const Options& opt) {
    const Lattice lat = parse_lattice(opt.lattice_spec);
    std::vector<LatticeVector> config;
    if (opt.block > 0) {
        if (lat.dim() != 2)
            throw std::invalid_argument("--block builds a 2-dimensional configuration");
        for (std::int64_t i = 0; i < opt.block; ++i)
            for (std::int64_t j = 0; j < opt.block; ++j) config.push_back({i, j});
    } else if (!opt.config_spec.empty()) {
        for (const auto& row : split(opt.config_spec, ';')) config.push_back(parse_ints(row));
    } else {
        throw std::invalid_argument("holes needs --block or --config");
    }
    std::vector<std::uint64_t> moduli;
    if (!opt.moduli_spec.empty())
        for (std::int64_t m : parse_ints(opt.moduli_spec))
            moduli.push_back(static_cast<std::uint64_t>(m));
    const auto t = find_hole(lat, config, moduli);
    bool verified = true;
    for (const auto& c : config) {
        LatticeVector p(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) p[i] = c[i] + t[i];
        verified = verified && !is_visible(p);
    }
    return {{"config_size", config.size()}, {"t", t}, {"verified", verified}};
}

json run_gaps(const Options& opt) {
    std::vector<std::uint64_t> moduli;
    if (!opt.moduli_spec.empty())
        for (std::int64_t m : parse_ints(opt.moduli_spec))
            moduli.push_back(static_cast<std::uint64_t>(m));
    const std::int64_t n = find_gap(opt.k, opt.gap_length, moduli);
    bool verified = true;
    for (std::uint64_t j = 0; j < opt.gap_length; ++j)
        verified = verified && !is_kfree(n + static_cast<std::int64_t>(j), opt.k);
    return {{"k", opt.k}, {"length", opt.gap_length}, {"N", n}, {"verified", verified}};
}

json run_series(const Options& opt) {
    SeriesKind kind;
    if (opt.kind == "zeta") kind = SeriesKind::Zeta;
    else if (opt.kind == "inv_zeta") kind = SeriesKind::InvZeta;
    else if (opt.kind == "xi") kind = SeriesKind::Xi;
    else throw std::invalid_argument("--kind must be zeta, inv_zeta or xi");
    const SeriesValue v = eval_series(kind, opt.s, opt.prime_bound);
    return {{"kind", opt.kind},
            {"s", opt.s},
            {"prime_bound", opt.prime_bound},
            {"value", v.value},
            {"tail_bound", v.tail_bound},
            {"truncation", v.truncation}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"visible lattice points and k-free integers: densities, autocorrelations, diffraction"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* cmd, bool with_lattice, bool with_k) {
        if (with_lattice)
            cmd->add_option("--lattice", opt.lattice_spec,
                            "identity In, or basis rows 'a,b;c,d' (columns are basis vectors)");
        if (with_k) cmd->add_option("--k", opt.k, "power-free exponent k >= 2");
        cmd->add_option("--threads", opt.threads, "slab/thread count (default $LATDIFF_THREADS or 1)")
            ->check(CLI::Range(1, 256));
        cmd->add_option("--prime-bound", opt.prime_bound, "Euler-product truncation");
        cmd->add_option("--out", opt.out, "artifact output path");
        cmd->add_option("--format", opt.format, "csv or json for tables")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    CLI::App* points = app.add_subcommand("points", "enumerate lattice points in a ball (CSV)");
    add_common(points, true, false);
    points->add_option("--radius", opt.radii, "ball radius")->expected(1);
    points->add_option("--center", opt.center_spec, "ball center, comma-separated");
    points->add_option("--filter", opt.filter_spec, "all | visible | content=m");
    points->get_option("--out")->required();

    CLI::App* kfree_cmd = app.add_subcommand("kfree", "enumerate k-free integers in [lo,hi] (CSV)");
    add_common(kfree_cmd, false, true);
    kfree_cmd->add_option("--lo", opt.lo, "interval start")->required();
    kfree_cmd->add_option("--hi", opt.hi, "interval end")->required();
    kfree_cmd->get_option("--out")->required();

    CLI::App* density = app.add_subcommand("density", "point-set density vs the closed form");
    add_common(density, true, true);
    density->add_option("--set", opt.set, "visible | kfree | all")
        ->check(CLI::IsMember({"visible", "kfree", "all"}));
    density->add_option("--radius", opt.radii, "radius schedule (repeatable)");
    density->add_option("--center", opt.center_spec, "ball center");
    density->add_option("--region", opt.region_spec, "ball | box")
        ->check(CLI::IsMember({"ball", "box"}));
    density->add_option("--halfwidths", opt.halfwidth_spec, "box half-widths");

    CLI::App* autocorr = app.add_subcommand("autocorr", "autocorrelation coefficient w_R(a)");
    add_common(autocorr, true, true);
    autocorr->add_option("--set", opt.set, "visible | kfree | all")
        ->check(CLI::IsMember({"visible", "kfree", "all"}));
    autocorr->add_option("--a", opt.a_spec, "displacement (integer coordinates)")->required();
    autocorr->add_option("--radius", opt.radii, "radius schedule (repeatable)");
    autocorr->add_flag("--one-sided", opt.one_sided, "drop the |x-a| < R ball condition");

    CLI::App* fourier = app.add_subcommand("fourier", "Fourier-Bohr coefficient m_x(R)");
    add_common(fourier, true, true);
    fourier->add_option("--set", opt.set, "visible | kfree | all")
        ->check(CLI::IsMember({"visible", "kfree", "all"}));
    fourier->add_option("--x", opt.x_spec,
                        "frequency in dual-basis coordinates; fractions p/q mark exact Bragg points")
        ->required();
    fourier->add_option("--radius", opt.radii, "radius schedule (repeatable)");

    CLI::App* peaks = app.add_subcommand("peaks", "closed-form Bragg peaks in a window (CSV)");
    add_common(peaks, true, true);
    peaks->add_option("--set", opt.set, "visible | kfree")
        ->check(CLI::IsMember({"visible", "kfree"}));
    peaks->add_option("--qmax", opt.q_max, "largest denominator")->required();
    peaks->add_option("--window", opt.window_spec, "lo_1..lo_n,hi_1..hi_n (default unit cell)");
    peaks->add_option("--floor", opt.intensity_floor, "drop peaks below this intensity");
    peaks->get_option("--out")->required();

    CLI::App* map_cmd = app.add_subcommand("map", "rasterize the peak intensities to a PGM");
    add_common(map_cmd, true, true);
    map_cmd->add_option("--set", opt.set, "visible | kfree")
        ->check(CLI::IsMember({"visible", "kfree"}));
    map_cmd->add_option("--qmax", opt.q_max, "largest denominator")->required();
    map_cmd->add_option("--window", opt.window_spec, "lo_1..lo_n,hi_1..hi_n (default unit cell)");
    map_cmd->add_option("--floor", opt.intensity_floor, "drop peaks below this intensity");
    map_cmd->add_option("--resolution", opt.resolution, "pixels per dual-space unit");
    map_cmd->add_option("--gamma", opt.gamma, "intensity gamma for display");
    map_cmd->get_option("--out")->required();

    CLI::App* holes = app.add_subcommand("holes", "translate a configuration into invisibility");
    add_common(holes, true, false);
    holes->add_option("--block", opt.block, "use the BxB block {0..B-1}^2");
    holes->add_option("--config", opt.config_spec, "points 'x,y;x,y;...'");
    holes->add_option("--moduli", opt.moduli_spec, "pairwise coprime moduli (default first primes)");

    CLI::App* gaps = app.add_subcommand("gaps", "run of L consecutive non-k-free integers");
    add_common(gaps, false, true);
    gaps->add_option("--length", opt.gap_length, "run length L")->required();
    gaps->add_option("--moduli", opt.moduli_spec, "pairwise coprime moduli (default first primes)");

    CLI::App* series = app.add_subcommand("series", "truncated Euler products with tail bounds");
    add_common(series, false, false);
    series->add_option("--kind", opt.kind, "zeta | inv_zeta | xi")
        ->check(CLI::IsMember({"zeta", "inv_zeta", "xi"}));
    series->add_option("--s", opt.s, "integer exponent s >= 2")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    json summary;
    summary["schema"] = 1;
    try {
        if (points->parsed()) {
            summary["command"] = "points";
            summary.update(run_points(opt));
        } else if (kfree_cmd->parsed()) {
            summary["command"] = "kfree";
            summary.update(run_kfree(opt));
        } else if (density->parsed()) {
            summary["command"] = "density";
            summary.update(run_density(opt));
        } else if (autocorr->parsed()) {
            summary["command"] = "autocorr";
            summary.update(run_autocorr(opt));
        } else if (fourier->parsed()) {
            summary["command"] = "fourier";
            summary.update(run_fourier(opt));
        } else if (peaks->parsed()) {
            summary["command"] = "peaks";
            summary.update(run_peaks(opt));
        } else if (map_cmd->parsed()) {
            summary["command"] = "map";
            summary.update(run_map(opt));
        } else if (holes->parsed()) {
            summary["command"] = "holes";
            summary.update(run_holes(opt));
        } else if (gaps->parsed()) {
            summary["command"] = "gaps";
            summary.update(run_gaps(opt));
        } else if (series->parsed()) {
            summary["command"] = "series";
            summary.update(run_series(opt));
        }
    } catch (const SizeLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\nrun with --help for usage\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\nrun with --help for usage\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    std::cout << summary.dump() << "\n";
    return 0;
}
