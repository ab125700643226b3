#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

namespace pellkit::harness {

/// Bounds for the claim sweeps. Every bound must be at least 1.
struct SweepConfig {
    unsigned p_max = 50;
    unsigned k_max = 3;
    std::uint64_t y_max = 1000;
    std::uint64_t c_max = 10000;
    unsigned n_max = 20;
    unsigned j_max = 5;
    unsigned limit = 50;    // pairs: p <= limit; fujita: K <= limit
    unsigned b_max = 200;   // fifumi-desk
    unsigned t_max = 20;    // tm-ii-1-desk, tm-ii-2
    unsigned samples = 500; // dubo, lemma3
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::string output_path;
    std::string evidence_path;

    void validate() const
    {
        const std::uint64_t bounds[] = {p_max, k_max, y_max, c_max, n_max, j_max, limit, b_max, t_max, samples, workers};
        for (std::uint64_t b : bounds)
            if (b < 1)
                throw std::invalid_argument("sweep bounds must all be >= 1");
    }

    /// The parameters that determine the evidence (no paths, no worker count).
    nlohmann::json to_json() const
    {
        return {{"p_max", p_max}, {"k_max", k_max},     {"y_max", y_max}, {"c_max", c_max},
                {"n_max", n_max}, {"j_max", j_max},     {"limit", limit}, {"b_max", b_max},
                {"t_max", t_max}, {"samples", samples}, {"seed", seed}};
    }
};

/// fn applied to every input on `workers` threads; results keep input order.
template <class In, class Out>
std::vector<Out> parallel_map(const std::vector<In>& inputs, unsigned workers, const std::function<Out(const In&)>& fn)
{
    std::vector<Out> results(inputs.size());
    const unsigned n_threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(inputs.size())));
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < inputs.size(); ++i)
            results[i] = fn(inputs[i]);
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n_threads);
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned w = 0; w < n_threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < inputs.size(); i = next++)
                    results[i] = fn(inputs[i]);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool)
        th.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return results;
}

}  // namespace pellkit::harness
