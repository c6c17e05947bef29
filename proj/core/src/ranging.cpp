#include "dbeam/ranging.hpp"

#include "dbeam/fft.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dbeam {
namespace {

double mag_at(const CorrelationBuffer& corr, double idx) {
    return std::abs(bl_interp(corr.complex_values, idx));
}

/// Vertex of the parabola through (x0-1,y0) (x0,y1) (x0+1,y2), spacing h.
double parabola_vertex(double x_mid, double h, double y0, double y1, double y2) {
    const double d = y0 - 2.0 * y1 + y2;
    if (d >= 0.0) return x_mid;
    return x_mid + 0.5 * h * (y0 - y2) / d;
}

struct LobeTop {
    double tau = 0.0;
    double value = -1.0;
};

/// Refines the top of the correlation lobe holding discrete local max j:
/// parabola on the raw samples, then two parabola passes on band-limited
/// evaluations at shrinking pitch.
LobeTop refine_lobe_top(const CorrelationBuffer& corr, std::size_t j) {
    const auto& v = corr.values;
    double t = parabola_vertex(static_cast<double>(j), 1.0, v[j - 1], v[j], v[j + 1]);
    t = std::clamp(t, j - 0.6, j + 0.6);
    for (double pitch : {0.12, 0.025}) {
        double ys[5];
        for (int s = -2; s <= 2; ++s) ys[s + 2] = mag_at(corr, t + s * pitch);
        int b = 0;
        for (int s = 1; s < 5; ++s)
            if (ys[s] > ys[b]) b = s;
        b = std::clamp(b, 1, 3);
        t = parabola_vertex(t + (b - 2) * pitch, pitch, ys[b - 1], ys[b], ys[b + 1]);
    }
    return {t, mag_at(corr, t)};
}

bool better(const LobeTop& a, const LobeTop& b) {
    // strictly higher wins; near-ties resolve toward the smaller lag
    if (a.value > b.value * (1.0 + 1e-12)) return true;
    if (b.value > a.value * (1.0 + 1e-12)) return false;
    return a.tau < b.tau;
}

/// Global peak of the band-limited correlation magnitude. Candidate discrete
/// local maxima within a window of the raw argmax are refined to their exact
/// lobe tops and compared; a concave-envelope hill-climb then escapes windows
/// that did not contain the true lobe.
LobeTop find_global_top(const CorrelationBuffer& corr) {
    const auto& v = corr.values;
    const std::size_t n = v.size();
    const std::size_t k0 = corr.peak_index;
    if (k0 < 3 || k0 + 3 >= n)
        throw std::invalid_argument("correlation peak at buffer edge");

    constexpr std::size_t kWindow = 96;
    // discrete samples of a lobe can dip to |cos(0.69)| ~ 0.77 of its top,
    // so the candidate floor must sit below that
    constexpr double kFloor = 0.70;

    const std::size_t lo = (k0 > kWindow + 3) ? k0 - kWindow : 3;
    const std::size_t hi = std::min(n - 4, k0 + kWindow);
    std::vector<std::size_t> cands;
    for (std::size_t j = lo; j <= hi; ++j)
        if (v[j] >= kFloor * v[k0] && v[j] >= v[j - 1] && v[j] > v[j + 1])
            cands.push_back(j);
    if (cands.empty()) cands.push_back(k0);

    LobeTop best;
    for (std::size_t j : cands) {
        LobeTop t = refine_lobe_top(corr, j);
        if (best.value < 0.0 || better(t, best)) best = t;
    }

    // hill-climb lobe to lobe; lobe tops are unimodal under the pulse envelope
    if (cands.size() >= 3) {
        std::vector<double> gaps(cands.size() - 1);
        for (std::size_t i = 0; i + 1 < cands.size(); ++i)
            gaps[i] = static_cast<double>(cands[i + 1] - cands[i]);
        std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
        const double spacing = gaps[gaps.size() / 2];
        for (double sgn : {-1.0, 1.0}) {
            LobeTop cur = best;
            while (true) {
                const double guess = cur.tau + sgn * spacing;
                const auto jn = static_cast<long>(std::llround(guess));
                if (jn < 5 || jn + 5 >= static_cast<long>(n)) break;
                std::size_t j2 = static_cast<std::size_t>(jn);
                while (j2 > 3 && v[j2 - 1] > v[j2]) --j2;
                while (j2 + 4 < n && v[j2 + 1] > v[j2]) ++j2;
                if (j2 < 3 || j2 + 3 >= n) break;
                LobeTop t = refine_lobe_top(corr, j2);
                if (t.value > cur.value * (1.0 + 1e-15)) cur = t;
                else break;
            }
            if (better(cur, best)) best = cur;
        }
    }
    return best;
}

/// Natural cubic spline through (x_i, y_i) with uniform spacing h; evaluates
/// at arbitrary points inside the knot range.
class NaturalSpline {
public:
    NaturalSpline(double x0, double h, std::vector<double> y)
        : x0_(x0), h_(h), y_(std::move(y)) {
        const std::size_t n = y_.size();
        m_.assign(n, 0.0);
        if (n < 3) return;
        // tridiagonal solve for second derivatives, natural BCs
        std::vector<double> d(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i)
            d[i] = 6.0 * (y_[i - 1] - 2.0 * y_[i] + y_[i + 1]) / (h_ * h_);
        // forward sweep (diag 4, off-diag 1 in units of h; scaled form)
        std::vector<double> cp(n, 0.0), dp(n, 0.0);
        double beta = 4.0;
        cp[1] = 1.0 / beta;
        dp[1] = d[1] / beta;
        for (std::size_t i = 2; i + 1 < n; ++i) {
            beta = 4.0 - cp[i - 1];
            cp[i] = 1.0 / beta;
            dp[i] = (d[i] - dp[i - 1]) / beta;
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            m_[i] = dp[i] - cp[i] * m_[i + 1];
            if (i == 1) break;
        }
    }

    double operator()(double x) const {
        const std::size_t n = y_.size();
        double s = (x - x0_) / h_;
        auto i = static_cast<long>(std::floor(s));
        i = std::clamp<long>(i, 0, static_cast<long>(n) - 2);
        const double t = s - static_cast<double>(i);
        const double a = y_[i], b = y_[i + 1];
        const double ma = m_[i], mb = m_[i + 1];
        const double h2 = h_ * h_;
        return a * (1.0 - t) + b * t +
               h2 / 6.0 * ((1.0 - t) * ((1.0 - t) * (1.0 - t) - 1.0) * ma +
                           t * (t * t - 1.0) * mb);
    }

private:
    double x0_, h_;
    std::vector<double> y_;
    std::vector<double> m_;
};

} // namespace

CorrelationBuffer matched_filter(const SignalBuffer& received,
                                 const SignalBuffer& tmpl) {
    const std::size_t n = received.samples.size();
    const std::size_t m = tmpl.samples.size();
    if (n == 0 || m == 0) throw std::invalid_argument("empty input");
    if (m > n) throw std::invalid_argument("template longer than received buffer");
    if (received.sample_rate != tmpl.sample_rate)
        throw std::invalid_argument("sample-rate mismatch");

    const std::size_t len = fft::next_pow2(n + m);
    std::vector<cplx> a(len, cplx(0.0, 0.0));
    std::vector<cplx> b(len, cplx(0.0, 0.0));
    std::copy(received.samples.begin(), received.samples.end(), a.begin());
    std::copy(tmpl.samples.begin(), tmpl.samples.end(), b.begin());
    auto fa = fft::fft(a);
    auto fb = fft::fft(b);
    for (std::size_t i = 0; i < len; ++i) fa[i] *= std::conj(fb[i]);
    auto y = fft::ifft(fa);

    // circular result holds lag k at index k mod len; keep lags -(m-1)..(n-1)
    CorrelationBuffer out;
    const std::size_t n_lags = n + m - 1;
    out.complex_values.resize(n_lags);
    out.values.resize(n_lags);
    for (std::size_t i = 0; i < n_lags; ++i) {
        const long lag = static_cast<long>(i) - static_cast<long>(m - 1);
        const std::size_t src = (lag >= 0) ? static_cast<std::size_t>(lag)
                                           : len + static_cast<std::size_t>(lag);
        out.complex_values[i] = y[src];
        out.values[i] = std::abs(y[src]);
    }
    out.lag_step_s = 1.0 / received.sample_rate;
    out.first_lag_s = -static_cast<double>(m - 1) / received.sample_rate;
    out.peak_index = 0;
    for (std::size_t i = 1; i < n_lags; ++i)
        if (out.values[i] > out.values[out.peak_index]) out.peak_index = i;
    return out;
}

double interpolate_peak(const CorrelationBuffer& corr,
                        std::uint32_t refine_points) {
    if (corr.values.empty()) throw std::invalid_argument("empty correlation");
    if (corr.peak_index < 3 || corr.peak_index + 3 >= corr.values.size())
        throw std::invalid_argument("correlation peak at buffer edge");
    if (refine_points <= 1)
        return corr.lag_of(static_cast<double>(corr.peak_index));

    const LobeTop top = find_global_top(corr);
    const double center = std::round(top.tau);

    // spline knots must be band-limited: at 1-sample pitch the two-tone beat
    // is ~1.4 rad/sample and a cubic fit is off by ~0.1 samples at the peak
    constexpr double kKnotPitch = 0.125;
    constexpr int kKnotsHalf = 10; // +-1.25 samples
    std::vector<double> ky(2 * kKnotsHalf + 1);
    for (int i = -kKnotsHalf; i <= kKnotsHalf; ++i)
        ky[i + kKnotsHalf] = mag_at(corr, center + i * kKnotPitch);
    NaturalSpline spline(center - kKnotsHalf * kKnotPitch, kKnotPitch, std::move(ky));

    double best_x = center - 1.0, best_y = spline(center - 1.0);
    for (std::uint32_t i = 1; i < refine_points; ++i) {
        const double x = center - 1.0 +
                         2.0 * static_cast<double>(i) / (refine_points - 1);
        const double yv = spline(x);
        if (yv > best_y) {
            best_y = yv;
            best_x = x;
        }
    }
    return corr.lag_of(best_x);
}

RangeEstimate estimate_range(const SignalBuffer& received,
                             const SignalBuffer& tmpl, double c,
                             std::uint32_t refine_points) {
    const CorrelationBuffer corr = matched_filter(received, tmpl);
    const double delay = interpolate_peak(corr, refine_points);
    RangeEstimate est;
    est.delay = delay;
    est.range = c * delay / 2.0;
    const double idx = (delay - corr.first_lag_s) / corr.lag_step_s;
    est.peak_value = std::abs(bl_interp(corr.complex_values, idx));
    return est;
}

RangeEstimate estimate_range_multi(
    const SignalBuffer& received, const SignalBuffer& own_template,
    const std::vector<const SignalBuffer*>& interferer_templates, double c,
    std::uint32_t refine_points) {
    SignalBuffer work = received;
    for (const SignalBuffer* tpl : interferer_templates) {
        const CorrelationBuffer corr = matched_filter(work, *tpl);
        const LobeTop top = find_global_top(corr);
        const double delay_s = corr.lag_of(top.tau);
        const cplx peak = bl_interp(corr.complex_values, top.tau);
        const cplx amp = peak / energy(*tpl);
        SignalBuffer recon = fractional_delay(
            *tpl, delay_s, work.samples.size() - tpl->samples.size());
        for (std::size_t i = 0; i < work.samples.size(); ++i)
            work.samples[i] -= amp * recon.samples[i];
    }
    return estimate_range(work, own_template, c, refine_points);
}

double interpolation_tolerance_m(double sample_rate,
                                 std::uint32_t refine_points, double c) {
    return c / 2.0 * (2.0 / refine_points) / sample_rate;
}

} // namespace dbeam
