#include "cgur/states.hpp"
#include "detail/fft.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include <fftw3.h>

namespace cgur {
namespace detail {
namespace {

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const noexcept { fftw_destroy_plan(p); }
};
using PlanPtr = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// Planning is not thread safe in FFTW; execution through fftw_execute_dft is.
fftw_plan plan_for(int n, int sign) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, PlanPtr> plans;
    std::scoped_lock lock(mutex);
    auto& slot = plans[{n, sign}];
    if (!slot) {
        std::vector<std::complex<double>> buf(static_cast<std::size_t>(n));
        auto* p = reinterpret_cast<fftw_complex*>(buf.data());
        slot.reset(fftw_plan_dft_1d(n, p, p, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED));
        if (!slot) throw std::runtime_error("FFTW planning failed");
    }
    return slot.get();
}

// exp(i 2 pi k / n) with the argument reduced exactly before scaling.
std::complex<double> unit_phase(double k, double n) {
    const double r = std::fmod(k, n);
    return std::polar(1.0, 2.0 * std::numbers::pi * r / n);
}

} // namespace

void centred_dft(std::span<const std::complex<double>> in, std::span<std::complex<double>> out, int sign) {
    const std::size_t n = in.size();
    if (out.size() != n) throw std::invalid_argument("centred_dft: size mismatch");
    const double nd = static_cast<double>(n);
    const double a = 0.5 * (nd - 1.0);
    const double s = sign < 0 ? -1.0 : 1.0;
    std::vector<std::complex<double>> buf(n);
    // exp(s i 2pi (m-a)(j-a)/N) = e(s m j) e(-s a j) e(-s a m) e(s a^2)
    for (std::size_t j = 0; j < n; ++j) buf[j] = in[j] * unit_phase(-s * a * static_cast<double>(j), nd);
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(plan_for(static_cast<int>(n), sign), p, p);
    const std::complex<double> c = unit_phase(s * a * a, nd) / std::sqrt(nd);
    for (std::size_t m = 0; m < n; ++m) out[m] = buf[m] * unit_phase(-s * a * static_cast<double>(m), nd) * c;
}

} // namespace detail

namespace detail {

GridSpec reciprocal_transform(std::span<cplx> data, const GridSpec& g, double hbar, double out_centre, int sign) {
    const std::size_t n = g.n;
    if (data.size() != n) throw std::invalid_argument("reciprocal_transform: size mismatch");
    const double nd = static_cast<double>(n);
    const double a = 0.5 * (nd - 1.0);
    const double dout = 2.0 * std::numbers::pi * hbar / (nd * g.dx);
    const double cin = g.centre();
    const double s = sign < 0 ? -1.0 : 1.0;
    if (out_centre != 0.0)
        for (std::size_t j = 0; j < n; ++j)
            data[j] *= std::polar(1.0, s * out_centre * (static_cast<double>(j) - a) * g.dx / hbar);
    centred_dft(data, data, sign);
    const double scale = std::sqrt(g.dx / dout);
    const double const_phase = s * cin * out_centre / hbar;
    for (std::size_t m = 0; m < n; ++m)
        data[m] *= scale * std::polar(1.0, s * cin * (static_cast<double>(m) - a) * dout / hbar + const_phase);
    return GridSpec::centred(n, dout, out_centre);
}

} // namespace detail

namespace {

GridWavefunction reciprocal_transform(const GridWavefunction& in, double out_centre, int sign) {
    std::vector<cplx> buf(in.samples().begin(), in.samples().end());
    const GridSpec g = detail::reciprocal_transform(buf, in.grid(), in.hbar(), out_centre, sign);
    return GridWavefunction::normalized(std::move(buf), g, in.hbar());
}

} // namespace

GridWavefunction conjugate_wavefunction(const GridWavefunction& psi) { return reciprocal_transform(psi, 0.0, -1); }

GridWavefunction inverse_conjugate_wavefunction(const GridWavefunction& phi, double x_centre) {
    return reciprocal_transform(phi, x_centre, +1);
}

GridWavefunction frft(const GridWavefunction& psi, double angle) {
    if (!std::isfinite(angle)) throw std::invalid_argument("frft: angle must be finite");
    const double quarter = std::numbers::pi / 2;
    const double kf = std::round(angle / quarter);
    const double r = angle - kf * quarter;
    const int k = static_cast<int>(((static_cast<long long>(kf) % 4) + 4) % 4);

    GridWavefunction out = psi;
    if (r != 0.0) {
        // exp(-i r n) = exp(i r/2) X(t) P(s) X(t), with X(t) = exp(-i t x^2 / 2hbar),
        // P(s) = exp(-i s p^2 / 2hbar), t = tan(r/2), s = sin r.
        const double hbar = psi.hbar();
        const double t = std::tan(0.5 * r);
        const double sn = std::sin(r);
        const GridSpec g = psi.grid();
        auto x_chirp = [&](std::vector<cplx>& v, const GridSpec& grid, double coef) {
            for (std::size_t j = 0; j < v.size(); ++j) {
                const double x = grid.at(j);
                v[j] *= std::polar(1.0, -coef * x * x / (2.0 * hbar));
            }
        };
        std::vector<cplx> v(psi.samples().begin(), psi.samples().end());
        x_chirp(v, g, t);
        GridWavefunction mom = conjugate_wavefunction(GridWavefunction::normalized(std::move(v), g, hbar));
        std::vector<cplx> w(mom.samples().begin(), mom.samples().end());
        x_chirp(w, mom.grid(), sn);
        GridWavefunction back =
            inverse_conjugate_wavefunction(GridWavefunction::normalized(std::move(w), mom.grid(), hbar), g.centre());
        std::vector<cplx> u(back.samples().begin(), back.samples().end());
        x_chirp(u, g, t);
        const cplx phase = std::polar(1.0, 0.5 * r);
        for (auto& z : u) z *= phase;
        out = GridWavefunction::normalized(std::move(u), g, hbar);
    }
    for (int i = 0; i < k; ++i) out = conjugate_wavefunction(out);
    return out;
}

} // namespace cgur
