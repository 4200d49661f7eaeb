#ifndef TSUM_RNG_HPP
#define TSUM_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>

namespace tsum {

// splitmix64: tiny, seedable, identical output on every platform. Trials in
// the verification suites are reproducible from (suite seed, trial index)
// alone, so failures can be replayed in isolation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    static Rng for_trial(std::uint64_t seed, std::uint64_t trial) {
        Rng mix(seed ^ (0x9e3779b97f4a7c15ULL * (trial + 1)));
        mix.next();
        return mix;
    }

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    int uniform_int(int lo, int hi) { // inclusive
        return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    std::complex<double> annulus(double rmin, double rmax) {
        const double r = uniform(rmin, rmax);
        const double phi = uniform(0.0, 2.0 * 3.14159265358979323846);
        return {r * std::cos(phi), r * std::sin(phi)};
    }

    std::complex<double> box(double re_lo, double re_hi, double im_lo, double im_hi) {
        return {uniform(re_lo, re_hi), uniform(im_lo, im_hi)};
    }

private:
    std::uint64_t state_;
};

} // namespace tsum

#endif
