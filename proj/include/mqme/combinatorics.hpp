// combinatorics.hpp — weak compositions, bounded partitions and exact binomials
//
// The bound formulas sum or maximise over W_m^n, the set of m-tuples of non-negative
// integers that add up to n. Both enumerations below are streams with O(m) state.

#pragma once

#include <cstdint>
#include <iterator>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace mqme::comb {

using BigInt = boost::multiprecision::cpp_int;

// Binomial coefficient with the zero-on-invalid convention: 0 when b > a, b < 0 or a < 0.
BigInt binomial(std::int64_t a, std::int64_t b);

// Same convention, evaluated in floating point (exact up to 2^53).
double binomial_f(int a, int b);

// |W_m^n| = C(n+m-1, m-1); the empty composition counts once for (0, 0).
BigInt composition_count(std::int64_t n, std::int64_t m);
double composition_count_f(int n, int m);

// Shared iterator plumbing for the two streams below.
template <typename Stream>
class StreamIterator {
public:
    using value_type = std::span<const int>;
    using difference_type = std::ptrdiff_t;

    StreamIterator() = default;
    explicit StreamIterator(Stream* s) : s_(s) {}
    std::span<const int> operator*() const { return s_->current(); }
    StreamIterator& operator++() {
        s_->advance();
        return *this;
    }
    void operator++(int) { ++*this; }
    bool operator==(std::default_sentinel_t) const { return s_->done(); }

private:
    Stream* s_ = nullptr;
};

// Weak compositions of n into m parts in lexicographic order:
// (2, 2) -> (0,2), (1,1), (2,0).
class WeakCompositions {
public:
    WeakCompositions(int n, int m);

    std::span<const int> current() const { return parts_; }
    bool done() const { return done_; }
    void advance();

    StreamIterator<WeakCompositions> begin() { return StreamIterator<WeakCompositions>(this); }
    std::default_sentinel_t end() const { return {}; }

private:
    std::vector<int> parts_;
    bool done_ = false;
};

// Multisets of at most m positive integers summing to n, as non-increasing m-tuples
// padded with zeros, in reverse lexicographic order: (4, 3) -> (4,0,0), (3,1,0), (2,2,0), (2,1,1).
class BoundedPartitions {
public:
    BoundedPartitions(int n, int m);

    std::span<const int> current() const { return parts_; }
    bool done() const { return done_; }
    void advance();

    StreamIterator<BoundedPartitions> begin() { return StreamIterator<BoundedPartitions>(this); }
    std::default_sentinel_t end() const { return {}; }

private:
    bool fill_after(int i, int value, int remainder);

    std::vector<int> parts_;
    bool done_ = false;
};

inline WeakCompositions weak_compositions(int n, int m) { return {n, m}; }
inline BoundedPartitions partitions_at_most(int n, int m) { return {n, m}; }

} // namespace mqme::comb
