#ifndef HODGEQI_COMMON_HPP
#define HODGEQI_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace hodgeqi {

using MultiIndex = std::vector<int>;

inline int mi_order(const MultiIndex& a) {
    int n = 0;
    for (int v : a) n += v;
    return n;
}

inline MultiIndex mi_zero(int dim) { return MultiIndex(dim, 0); }

inline MultiIndex mi_unit(int dim, int axis, int order = 1) {
    MultiIndex a(dim, 0);
    a[axis] = order;
    return a;
}

// ---- error types ---------------------------------------------------------

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct invalid_argument_error : error {
    using error::error;
};
// Requested value of a radial expression at a point where no continuous
// extension exists.
struct nonremovable_singularity : error {
    using error::error;
};
// Projector direction ω/‖ω‖ undefined at ω = 0.
struct direction_undefined : error {
    using error::error;
};
struct empty_support : error {
    using error::error;
};
struct singular_system : error {
    using error::error;
};
struct empty_ring : error {
    using error::error;
};
struct empty_report : error {
    using error::error;
};
struct depth_limit_exceeded : error {
    using error::error;
};
struct term_growth_limit : error {
    using error::error;
};
struct config_error : error {
    using error::error;
};
struct io_error : error {
    using error::error;
};

// ---- small numeric helpers ------------------------------------------------

inline constexpr double pi = std::numbers::pi;

inline double ipow(double x, int n) {
    if (n < 0) return 1.0 / ipow(x, -n);
    double r = 1.0;
    while (n > 0) {
        if (n & 1) r *= x;
        x *= x;
        n >>= 1;
    }
    return r;
}

inline double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// ---- axis-aligned box -----------------------------------------------------

struct Box {
    std::vector<double> lo, hi;

    int dim() const { return static_cast<int>(lo.size()); }

    bool contains(const std::vector<double>& x, double tol = 0.0) const {
        for (std::size_t s = 0; s < lo.size(); ++s)
            if (x[s] < lo[s] - tol || x[s] > hi[s] + tol) return false;
        return true;
    }

    double width(int axis) const { return hi[axis] - lo[axis]; }
};

// ---- parallel loop --------------------------------------------------------

// Worker count: min(hardware, HODGEQI_THREADS) when the env var is set.
inline int worker_count() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("HODGEQI_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1 && cap < n) n = cap;
    }
    return n;
}

// Deterministic regardless of thread count: body(i) writes only slot i.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    int workers = worker_count();
    if (workers <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = static_cast<std::size_t>(w); i < count;
                 i += static_cast<std::size_t>(workers))
                body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace hodgeqi

#endif  // HODGEQI_COMMON_HPP
