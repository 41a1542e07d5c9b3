#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace cgur::detail {

// Cache keyed on inputs rounded to 44 significant bits (relative step ~6e-14).
// Callers evaluate at the rounded point so a result never depends on which
// nearby input arrived first.
class QuantizedMemo {
public:
    static double quantize(double x) {
        if (x == 0.0 || !std::isfinite(x)) return x;
        int e = 0;
        const double m = std::frexp(x, &e);
        return std::ldexp(std::round(std::ldexp(m, 44)), e - 44);
    }

    template <typename F>
    double get(double x, F&& compute) {
        const double xq = quantize(x);
        const auto key = std::bit_cast<std::uint64_t>(xq);
        {
            std::shared_lock lock(mutex_);
            if (auto it = table_.find(key); it != table_.end()) return it->second;
        }
        const double value = compute(xq);
        std::unique_lock lock(mutex_);
        if (table_.size() > kMaxEntries) table_.clear();
        table_.emplace(key, value);
        return value;
    }

private:
    static constexpr std::size_t kMaxEntries = 1u << 20;
    std::shared_mutex mutex_;
    std::unordered_map<std::uint64_t, double> table_;
};

} // namespace cgur::detail
