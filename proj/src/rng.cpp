#include "otaclass/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace otaclass {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

} // namespace

std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key) {
    std::array<std::uint32_t, 4> c = counter;
    std::array<std::uint32_t, 2> k = key;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return c;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t key, std::uint32_t id_hi, std::uint32_t id_mid,
                           std::uint32_t id_lo) noexcept
    : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
      counter_{0, id_lo, id_mid, id_hi},
      buf_{0.0, 0.0},
      buf_pos_(2),
      spare_normal_(0.0),
      have_spare_(false) {}

void RandomStream::refill() {
    const std::array<std::uint32_t, 4> r = philox4x32(counter_, key_);
    if (++counter_[0] == 0)
        throw std::length_error("random stream exhausted its 2^32 block budget");
    const std::uint64_t a = (static_cast<std::uint64_t>(r[0]) << 32) | r[1];
    const std::uint64_t b = (static_cast<std::uint64_t>(r[2]) << 32) | r[3];
    buf_[0] = static_cast<double>(a >> 11) * 0x1.0p-53;
    buf_[1] = static_cast<double>(b >> 11) * 0x1.0p-53;
    buf_pos_ = 0;
}

double RandomStream::uniform() {
    if (buf_pos_ > 1)
        refill();
    return buf_[buf_pos_++];
}

double RandomStream::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_normal_;
    }
    const double u1 = 1.0 - uniform(); // (0, 1], keeps the log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_normal_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

std::complex<double> RandomStream::complex_normal(double var) {
    const double s = std::sqrt(var * 0.5);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
}

double RandomStream::phase() {
    return 2.0 * M_PI * uniform();
}

} // namespace otaclass
