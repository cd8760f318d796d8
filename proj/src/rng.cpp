#include "fbmsde/rng.hpp"

#include <cmath>

namespace fbmsde::rng {

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t path,
                             std::uint64_t dim, std::uint64_t tag) {
    std::uint64_t s = mix(master);
    s = mix(s ^ (path * 0xd1342543de82ef95ULL + 1));
    s = mix(s ^ (dim * 0xaf251af3b0f025b5ULL + 1));
    s = mix(s ^ (tag * 0x9e6c63d0a286271fULL + 1));
    return s;
}

double NormalStream::uniform() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = mix(state_);
    // 53 mantissa bits, mapped into (0, 1].
    return (double(z >> 11) + 1.0) * 0x1.0p-53;
}

double NormalStream::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

}  // namespace fbmsde::rng
