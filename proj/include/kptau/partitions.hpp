#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kptau {

// Integer partition stored as weakly decreasing positive parts.
class Partition {
public:
    Partition() = default;

    explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
        while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (parts_[i] <= 0) throw std::invalid_argument("partition parts must be positive");
            if (i > 0 && parts_[i] > parts_[i - 1])
                throw std::invalid_argument("partition parts must be weakly decreasing");
        }
    }

    Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

    const std::vector<int>& parts() const { return parts_; }
    int length() const { return static_cast<int>(parts_.size()); }
    bool empty() const { return parts_.empty(); }

    int weight() const {
        int w = 0;
        for (int p : parts_) w += p;
        return w;
    }

    // lambda_i with 1-based i, zero beyond the length
    int operator[](int i) const {
        return (i >= 1 && i <= length()) ? parts_[i - 1] : 0;
    }

    // l_i = lambda_i - i for i = 1..n
    std::vector<int> particle_coordinates(int n) const {
        std::vector<int> l(n);
        for (int i = 1; i <= n; ++i) l[i - 1] = (*this)[i] - i;
        return l;
    }

    Partition conjugate() const {
        std::vector<int> c;
        if (!parts_.empty()) {
            c.resize(parts_.front(), 0);
            for (int p : parts_)
                for (int j = 0; j < p; ++j) ++c[j];
        }
        return Partition(std::move(c));
    }

    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(parts_[i]);
        }
        return s;
    }

    auto operator<=>(const Partition&) const = default;

private:
    std::vector<int> parts_;
};

struct FrobeniusCoords {
    std::vector<int> arms;
    std::vector<int> legs;

    int rank() const { return static_cast<int>(arms.size()); }

    std::string str() const {
        auto join = [](const std::vector<int>& v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) s += ',';
                s += std::to_string(v[i]);
            }
            return s;
        };
        return "(" + join(arms) + "|" + join(legs) + ")";
    }

    bool operator==(const FrobeniusCoords&) const = default;
};

inline FrobeniusCoords frobenius_of(const Partition& p) {
    FrobeniusCoords f;
    Partition c = p.conjugate();
    for (int i = 1; i <= p.length() && p[i] >= i; ++i) {
        f.arms.push_back(p[i] - i);
        f.legs.push_back(c[i] - i);
    }
    return f;
}

inline Partition partition_of_frobenius(const FrobeniusCoords& f) {
    const int r = f.rank();
    if (static_cast<int>(f.legs.size()) != r)
        throw std::invalid_argument("arms and legs must have equal length");
    for (int i = 0; i < r; ++i) {
        if (f.arms[i] < 0 || f.legs[i] < 0) throw std::invalid_argument("negative Frobenius coordinate");
        if (i > 0 && (f.arms[i] >= f.arms[i - 1] || f.legs[i] >= f.legs[i - 1]))
            throw std::invalid_argument("Frobenius coordinates must be strictly decreasing");
    }
    if (r == 0) return Partition();
    // rows 1..r from the arms, rows below the diagonal block from the legs
    int len = r + f.legs[0];
    std::vector<int> parts(len, 0);
    for (int i = 0; i < r; ++i) parts[i] = f.arms[i] + i + 1;
    for (int j = 0; j < r; ++j)
        for (int row = r; row <= j + f.legs[j]; ++row) parts[row] = std::max(parts[row], j + 1);
    return Partition(std::move(parts));
}

inline Partition hook_from(int a, int b) {
    if (a < 0 || b < 0) throw std::invalid_argument("hook arm and leg must be nonnegative");
    std::vector<int> parts(b + 1, 1);
    parts[0] = a + 1;
    return Partition(std::move(parts));
}

// All partitions of n in reverse-lexicographic order.
inline std::vector<Partition> partitions_of(int n) {
    std::vector<Partition> out;
    if (n < 0) return out;
    if (n == 0) {
        out.emplace_back();
        return out;
    }
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int rest, int maxpart) {
        if (rest == 0) {
            out.emplace_back(cur);
            return;
        }
        for (int p = std::min(rest, maxpart); p >= 1; --p) {
            cur.push_back(p);
            rec(rest - p, p);
            cur.pop_back();
        }
    };
    rec(n, n);
    return out;
}

inline std::vector<Partition> partitions_up_to_weight(int W) {
    std::vector<Partition> out;
    for (int n = 0; n <= W; ++n) {
        auto ps = partitions_of(n);
        out.insert(out.end(), ps.begin(), ps.end());
    }
    return out;
}

// Parse "3,3,1" or "" (empty partition).
inline Partition parse_partition(const std::string& s) {
    std::vector<int> parts;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        parts.push_back(std::stoi(s.substr(pos, next - pos)));
        pos = next + 1;
    }
    return Partition(std::move(parts));
}

} // namespace kptau
