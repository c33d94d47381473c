#include "selberg/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "selberg/parallel.hpp"

namespace selberg::zeta {

namespace {

struct Kahan {
    double sum = 0.0, comp = 0.0;
    void add(double v) {
        double y = v - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

// 1/(1 - eps(3)^-2); LambdaBar(n) <= 2 k3 log eps(n) <= 2 k3 log n
double k3() {
    double e3 = spectrum::eps_of(3);
    return 1.0 / (1.0 - 1.0 / (e3 * e3));
}

// largest C with m(n) <= C n^1.15 over the table (the empirical envelope
// behind every heuristic tail bound; reported alongside the bounds)
double envelope_coeff(const spectrum::SpectrumTable& table) {
    double best = 0.0;
    for (const auto& e : table.entries) {
        double m = mpq_get_d(e.m.get_mpq_t());
        best = std::max(best, m / std::pow(static_cast<double>(e.n), 1.15));
    }
    return best;
}

// number of leading table entries with n < X (entries are dense from 3)
std::size_t entries_below(const spectrum::SpectrumTable& table, double X) {
    if (X <= 3) return 0;
    double nmax = std::floor(X);
    long long last = static_cast<long long>(nmax);
    if (static_cast<double>(last) >= X) --last;  // strict n < X
    if (last < 3) return 0;
    auto count = static_cast<std::size_t>(last - 2);
    return std::min(count, table.entries.size());
}

}  // namespace

double cutoff_X(double x) {
    if (!(x > 0)) throw std::invalid_argument("cutoff_X: x > 0 required");
    double r = std::sqrt(x);
    return r + 1.0 / r;
}

std::complex<double> phi(const EvalPoint& p, const spectrum::SpectrumTable& table) {
    if (!(p.x > 0)) throw std::invalid_argument("phi: x > 0 required");
    double X = cutoff_X(p.x);
    if (X > table.X)
        throw std::runtime_error("phi: table covers X=" + std::to_string(table.X) +
                                 " but x needs X=" + std::to_string(X));
    std::size_t count = entries_below(table, X);
    Kahan re, im;
    for (std::size_t i = 0; i < count; ++i) {
        const auto& e = table.entries[i];
        double m = mpq_get_d(e.m.get_mpq_t());
        double lb = e.lambda_bar * (1.0 - e.eps * e.eps / p.x);
        double w = m * lb * std::exp(-2.0 * p.sigma * e.log_eps);
        double phase = -2.0 * p.t * e.log_eps;
        re.add(w * std::cos(phase));
        im.add(w * std::sin(phase));
    }
    return {re.sum, im.sum};
}

LogDerivResult log_deriv_series(double sigma, double t, const spectrum::SpectrumTable& table) {
    if (!(sigma > 1.0))
        throw std::invalid_argument("log_deriv_series: sigma > 1 required (divergent otherwise)");
    Kahan re, im;
    for (const auto& e : table.entries) {
        double m = mpq_get_d(e.m.get_mpq_t());
        double w = m * e.lambda_bar * std::exp(-2.0 * sigma * e.log_eps);
        double phase = -2.0 * t * e.log_eps;
        re.add(w * std::cos(phase));
        im.add(w * std::sin(phase));
    }
    LogDerivResult out;
    out.value = {re.sum, im.sum};
    // envelope tail: sum_{n >= N0} C n^1.15 * 2 k3 ln n * ((1-1/N0) n)^{-2 sigma}
    double C = envelope_coeff(table);
    double beta = 2.0 * sigma - 1.15;
    if (beta <= 1.0) {
        out.tail_bound = std::numeric_limits<double>::infinity();
        return out;
    }
    double N0 = (table.entries.empty() ? 3.0
                                       : static_cast<double>(table.entries.back().n + 1));
    double lnN = std::log(N0);
    double integral = std::pow(N0, 1.0 - beta) * (lnN / (beta - 1.0) + 1.0 / ((beta - 1.0) * (beta - 1.0)));
    double first = std::pow(N0, -beta) * lnN;
    double scale = std::pow(1.0 - 1.0 / N0, -2.0 * sigma);
    out.tail_bound = C * 2.0 * k3() * scale * (first + integral);
    return out;
}

SquareIntegralResult square_integral_mean(double sigma, double T, double x,
                                          const spectrum::SpectrumTable& table, int threads) {
    if (!(T > 1)) throw std::invalid_argument("square_integral_mean: T > 1 required");
    double X = cutoff_X(x);
    if (X > table.X)
        throw std::runtime_error("square_integral_mean: table too small for requested x");
    std::size_t count = entries_below(table, X);

    std::vector<double> w(count), L(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto& e = table.entries[i];
        double m = mpq_get_d(e.m.get_mpq_t());
        w[i] = m * e.lambda_bar * (1.0 - e.eps * e.eps / x) * std::exp(-2.0 * sigma * e.log_eps);
        L[i] = e.log_eps;
    }

    SquareIntegralResult out;
    out.T = T;
    out.x = x;
    out.sigma = sigma;

    Kahan diag;
    for (std::size_t i = 0; i < count; ++i) diag.add(w[i] * w[i]);
    out.diagonal = diag.sum * (T - 1.0) / T;

    // off-diagonal: unordered pairs i<j combine to
    //   w_i w_j (sin(2T theta) - sin(2 theta)) / theta,  theta = L_i - L_j,
    // accumulated per fixed-size row tile and merged in tile order so the
    // result is identical for every thread count.
    constexpr std::size_t kTile = 128;
    std::size_t tiles = (count + kTile - 1) / kTile;
    std::vector<double> partial(tiles, 0.0);
    parallel_for(0, static_cast<long long>(tiles), threads, [&](long long tile) {
        std::size_t lo = static_cast<std::size_t>(tile) * kTile;
        std::size_t hi = std::min(lo + kTile, count);
        Kahan acc;
        for (std::size_t i = lo; i < hi; ++i) {
            for (std::size_t j = i + 1; j < count; ++j) {
                double theta = L[i] - L[j];
                double tt = theta * T;
                double factor;
                if (std::fabs(tt) < 1e-4) {
                    double th2 = theta * theta;
                    factor = 2.0 * (T - 1.0) - (4.0 / 3.0) * th2 * (T * T * T - 1.0) +
                             (4.0 / 15.0) * th2 * th2 * (T * T * T * T * T - 1.0);
                } else {
                    factor = (std::sin(2.0 * tt) - std::sin(2.0 * theta)) / theta;
                }
                acc.add(w[i] * w[j] * factor);
            }
        }
        partial[static_cast<std::size_t>(tile)] = acc.sum;
    });
    Kahan off;
    for (double v : partial) off.add(v);
    out.offdiagonal = off.sum / T;

    out.mean = out.diagonal + out.offdiagonal;
    return out;
}

namespace {

CConstResult c_constant_core(double sigma, const spectrum::SpectrumTable& table, long long N) {
    if (!(sigma > 0.75))
        throw std::invalid_argument("c_constant: sigma > 3/4 required (series divergent)");
    if (N < 3) throw std::invalid_argument("c_constant: N >= 3 required");
    if (table.entries.empty() || table.entries.back().n < N)
        throw std::runtime_error("c_constant: table does not reach N");
    Kahan acc;
    for (const auto& e : table.entries) {
        if (e.n > N) break;
        double m = mpq_get_d(e.m.get_mpq_t());
        double term = m * e.lambda_bar * std::exp(-2.0 * sigma * e.log_eps);
        acc.add(term * term);
    }
    CConstResult out;
    out.partial = acc.sum;
    out.envelope_coeff = envelope_coeff(table);
    // heuristic tail from m(n) <= C n^1.15:
    //   sum_{n > N} C^2 (2 k3 ln n)^2 n^2.3 ((1-1/N) n)^{-4 sigma}
    double beta = 4.0 * sigma - 2.3;
    if (beta <= 1.0) {
        out.tail_bound = std::numeric_limits<double>::infinity();
        return out;
    }
    double Nd = static_cast<double>(N) + 1.0;
    double lnN = std::log(Nd);
    double b1 = beta - 1.0;
    double integral = std::pow(Nd, 1.0 - beta) *
                      (lnN * lnN / b1 + 2.0 * lnN / (b1 * b1) + 2.0 / (b1 * b1 * b1));
    double first = std::pow(Nd, -beta) * lnN * lnN;
    double scale = std::pow(1.0 - 1.0 / Nd, -4.0 * sigma);
    double c2k = out.envelope_coeff * 2.0 * k3();
    out.tail_bound = c2k * c2k * scale * (first + integral);
    return out;
}

}  // namespace

CConstResult c_constant(double sigma, const spectrum::WeightMode& w, long long N, int threads) {
    if (N < 3) throw std::invalid_argument("c_constant: N >= 3 required");
    spectrum::SpectrumTable table = spectrum::build_table(static_cast<double>(N) + 0.5, w, threads);
    return c_constant_core(sigma, table, N);
}

CConstResult c_constant(double sigma, const spectrum::SpectrumTable& table, long long N) {
    return c_constant_core(sigma, table, N);
}

double prime_geodesic_count(double x, const spectrum::SpectrumTable& table) {
    if (!(x > 4)) throw std::invalid_argument("prime_geodesic_count: x > 4 required");
    double X = cutoff_X(x);
    if (X > table.X)
        throw std::runtime_error("prime_geodesic_count: table too small for requested x");
    std::size_t count = entries_below(table, X);
    mpq_class total = 0;
    for (std::size_t i = 0; i < count; ++i)
        for (const auto& c : table.entries[i].components)
            if (c.j == 1) total += c.lambda * static_cast<long>(c.h);
    return mpq_get_d(total.get_mpq_t());
}

double prime_geodesic_count(double x, const spectrum::WeightMode& w) {
    if (!(x > 4)) throw std::invalid_argument("prime_geodesic_count: x > 4 required");
    double X = cutoff_X(x);
    if (X <= 3) return 0.0;
    spectrum::SpectrumTable table = spectrum::build_table(X, w);
    return prime_geodesic_count(x, table);
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fb, double fm, double tol, int depth) {
    double m = (a + b) / 2;
    double lm = (a + m) / 2, rm = (m + b) / 2;
    double flm = f(lm), frm = f(rm);
    double h = b - a;
    double whole = h / 6.0 * (fa + 4.0 * fm + fb);
    double left = h / 12.0 * (fa + 4.0 * flm + fm);
    double right = h / 12.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0) throw std::runtime_error("adaptive quadrature: subdivision budget exhausted");
    if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, fm, flm, tol / 2, depth - 1) +
           adaptive_simpson(f, m, b, fm, fb, frm, tol / 2, depth - 1);
}

}  // namespace

double li(double x) {
    if (!(x >= 2.0)) throw std::invalid_argument("li: x >= 2 required");
    if (x == 2.0) return 0.0;
    auto f = [](double t) { return 1.0 / std::log(t); };
    // split at powers of 4 to keep each panel tame
    double total = 0.0;
    double a = 2.0;
    while (a < x) {
        double b = std::min(x, a * 4.0);
        total += adaptive_simpson(f, a, b, f(a), f(b), f((a + b) / 2), 1e-10, 52);
        a = b;
    }
    return total;
}

double default_x_rule(double T) { return T * T * T; }

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("fit_slope: need matching samples, at least two");
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0) throw std::invalid_argument("fit_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / denom;
}

double growth_exponent(double sigma, const std::vector<double>& Ts,
                       const std::function<double(double)>& x_rule,
                       const spectrum::SpectrumTable& table, int threads) {
    std::vector<double> uniq = Ts;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    if (uniq.size() < 3)
        throw std::invalid_argument("growth_exponent: at least 3 distinct T values required");
    std::vector<double> lx, ly;
    for (double T : uniq) {
        double x = x_rule ? x_rule(T) : default_x_rule(T);
        SquareIntegralResult r = square_integral_mean(sigma, T, x, table, threads);
        if (!(r.mean > 0))
            throw std::runtime_error("growth_exponent: nonpositive mean square at T=" +
                                     std::to_string(T));
        lx.push_back(std::log(T));
        ly.push_back(std::log(r.mean));
    }
    return fit_slope(lx, ly);
}

}  // namespace selberg::zeta
