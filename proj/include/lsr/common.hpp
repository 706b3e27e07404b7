#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace lsr {

enum class ErrorKind {
    Dimension,
    Parameter,
    Config,
    Training,
    Io,
    Data,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::Dimension: return "dimension";
        case ErrorKind::Parameter: return "parameter";
        case ErrorKind::Config:    return "config";
        case ErrorKind::Training:  return "training";
        case ErrorKind::Io:        return "io";
        case ErrorKind::Data:      return "data";
    }
    return "unknown";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

/// Runs fn(i) for i in [begin, end). Work is chunked over `threads` workers;
/// callers must only write to disjoint locations indexed by i.
inline void parallel_for(std::size_t begin, std::size_t end,
                         const std::function<void(std::size_t)>& fn, unsigned threads = 0) {
    if (end <= begin) return;
    if (threads == 0) threads = std::thread::hardware_concurrency();
    if (threads <= 1 || end - begin == 1) {
        for (std::size_t i = begin; i < end; ++i) fn(i);
        return;
    }
    const std::size_t n = end - begin;
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            // fixed block partition keeps the assignment deterministic
            const std::size_t lo = begin + n * w / workers;
            const std::size_t hi = begin + n * (w + 1) / workers;
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

/// Deterministic bounded draw; std::uniform_int_distribution is not pinned
/// across standard library implementations.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
    return n == 0 ? 0 : rng() % n;
}

inline double uniform_real01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Fisher-Yates prefix shuffle: after the call, v[0..k) is a uniform sample
/// without replacement.
template <typename T>
void partial_shuffle(std::vector<T>& v, std::size_t k, std::mt19937_64& rng) {
    const std::size_t n = v.size();
    if (k > n) k = n;
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + static_cast<std::size_t>(uniform_index(rng, n - i));
        std::swap(v[i], v[j]);
    }
}

}  // namespace lsr
