#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace waypath {

// Shortest decimal string that round-trips the double exactly. Used for every
// number we write to files or stdout so output is byte-stable per input.
std::string format_double(double v);

// Seeded RNG wrapper. The mt19937_64 stream is pinned by the standard; the
// bounded/unit mappings below are hand-rolled because std distributions are
// implementation-defined and would break cross-build determinism.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, n). n must be >= 1.
    std::size_t bounded(std::size_t n) {
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    // Uniform double in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double range(double lo, double hi) { return lo + (hi - lo) * unit(); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = bounded(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

enum class LogLevel { debug = 0, info = 1, warn = 2, error = 3, off = 4 };

// Level parsed once from WAYPATH_LOG (debug|info|warn|error|off); default warn.
LogLevel log_level();
void log(LogLevel level, const std::string& message);

}  // namespace waypath
