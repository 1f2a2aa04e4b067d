// combinatorics.cpp — composition / partition streams and binomials

#include "mqme/combinatorics.hpp"

#include <algorithm>
#include <cmath>

#include "mqme/errors.hpp"

namespace mqme::comb {

BigInt binomial(std::int64_t a, std::int64_t b) {
    if (a < 0 || b < 0 || b > a) return 0;
    if (b > a - b) b = a - b;
    BigInt r = 1;
    for (std::int64_t i = 1; i <= b; ++i) {
        r *= (a - b + i);
        r /= i;
    }
    return r;
}

double binomial_f(int a, int b) {
    if (a < 0 || b < 0 || b > a) return 0.0;
    if (b > a - b) b = a - b;
    double r = 1.0;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r < 9.0e15 ? std::round(r) : r;
}

BigInt composition_count(std::int64_t n, std::int64_t m) {
    if (m == 0) return n == 0 ? 1 : 0;
    return binomial(n + m - 1, m - 1);
}

double composition_count_f(int n, int m) {
    if (m == 0) return n == 0 ? 1.0 : 0.0;
    return binomial_f(n + m - 1, m - 1);
}

WeakCompositions::WeakCompositions(int n, int m) {
    if (n < 0 || m < 0) throw DomainError("weak compositions need n >= 0 and m >= 0");
    if (m == 0) {
        done_ = n > 0; // m = 0: only the empty composition of 0
        return;
    }
    parts_.assign(m, 0);
    parts_.back() = n;
}

void WeakCompositions::advance() {
    if (done_) return;
    const int m = static_cast<int>(parts_.size());
    int k = m - 1;
    while (k >= 0 && parts_[k] == 0) --k;
    if (k <= 0) {
        done_ = true;
        return;
    }
    // move one unit from the tail into position k-1; the rest of the tail goes last
    const int v = parts_[k];
    parts_[k] = 0;
    ++parts_[k - 1];
    parts_[m - 1] = v - 1;
}

BoundedPartitions::BoundedPartitions(int n, int m) {
    if (n < 0 || m < 1) throw DomainError("bounded partitions need n >= 0 and m >= 1");
    parts_.assign(m, 0);
    parts_[0] = n;
}

bool BoundedPartitions::fill_after(int i, int value, int remainder) {
    const int m = static_cast<int>(parts_.size());
    if (static_cast<long>(value) * (m - 1 - i) < remainder) return false;
    for (int j = i + 1; j < m; ++j) {
        const int p = std::min(value, remainder);
        parts_[j] = p;
        remainder -= p;
    }
    return true;
}

void BoundedPartitions::advance() {
    if (done_) return;
    const int m = static_cast<int>(parts_.size());
    // tail sum of everything right of candidate i
    int tail = 0;
    for (int i = m - 1; i >= 0; --i) {
        if (parts_[i] > 1) {
            const int v = parts_[i] - 1;
            if (fill_after(i, v, tail + 1)) {
                parts_[i] = v;
                return;
            }
        }
        tail += parts_[i];
    }
    done_ = true;
}

} // namespace mqme::comb
