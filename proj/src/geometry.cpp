#include "coarray/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>
#include <string_view>

namespace coarray {

SensorArray::SensorArray(std::vector<int> positions) : positions_(std::move(positions)) {
    if (positions_.size() < 2) {
        throw std::invalid_argument("sensor array needs at least two sensors");
    }
    for (std::size_t i = 0; i < positions_.size(); ++i) {
        if (positions_[i] < 0) {
            throw std::invalid_argument("sensor positions must be non-negative");
        }
        if (i > 0 && positions_[i] <= positions_[i - 1]) {
            throw std::invalid_argument("sensor positions must be strictly increasing");
        }
    }
}

bool SensorArray::is_ula() const {
    return positions_.back() - positions_.front() + 1 == static_cast<int>(positions_.size());
}

SensorArray nested(int n1, int n2) {
    if (n2 <= 0 || n1 <= 0) {
        throw std::invalid_argument("nested array needs n1, n2 > 0");
    }
    if (n2 > n1) {
        throw std::invalid_argument("nested array needs n1 >= n2");
    }
    std::vector<int> pos;
    pos.reserve(static_cast<std::size_t>(n1 + n2));
    for (int n = 1; n <= n1; ++n) pos.push_back(n);
    for (int m = 1; m <= n2; ++m) pos.push_back(m * (n1 + 1));
    return SensorArray(std::move(pos));
}

SensorArray balanced_nested(int num_sensors) {
    if (num_sensors < 2) throw std::invalid_argument("nested array needs P >= 2");
    return nested((num_sensors + 1) / 2, num_sensors / 2);
}

SensorArray ula(int num_sensors) {
    if (num_sensors < 2) throw std::invalid_argument("ULA needs P >= 2");
    return nested(num_sensors - 1, 1);
}

SensorArray ula_zero_based(int num_sensors) {
    if (num_sensors < 2) throw std::invalid_argument("ULA needs P >= 2");
    std::vector<int> pos(static_cast<std::size_t>(num_sensors));
    for (int i = 0; i < num_sensors; ++i) pos[static_cast<std::size_t>(i)] = i;
    return SensorArray(std::move(pos));
}

SensorArray custom_array(std::vector<int> positions) {
    std::sort(positions.begin(), positions.end());
    if (std::adjacent_find(positions.begin(), positions.end()) != positions.end()) {
        throw std::invalid_argument("duplicate sensor position");
    }
    return SensorArray(std::move(positions));
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::vector<int> parse_int_list(std::string_view s, const std::string& spec) {
    std::vector<int> out;
    while (true) {
        auto comma = s.find(',');
        auto item = trim(s.substr(0, comma));
        int v = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
            throw std::invalid_argument("bad integer in array spec '" + spec + "'");
        }
        out.push_back(v);
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace

SensorArray parse_array_spec(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) {
        throw std::invalid_argument("array spec must look like kind:args, got '" + spec + "'");
    }
    std::string_view kind = trim(std::string_view(spec).substr(0, colon));
    std::string_view args = trim(std::string_view(spec).substr(colon + 1));
    if (kind == "nested") {
        auto v = parse_int_list(args, spec);
        if (v.size() != 2) throw std::invalid_argument("nested:N1,N2 takes two integers");
        return nested(v[0], v[1]);
    }
    if (kind == "ula") {
        auto v = parse_int_list(args, spec);
        if (v.size() != 1) throw std::invalid_argument("ula:P takes one integer");
        return ula(v[0]);
    }
    if (kind == "custom") {
        if (args.size() < 2 || args.front() != '[' || args.back() != ']') {
            throw std::invalid_argument("custom array must be custom:[d1,d2,...]");
        }
        return custom_array(parse_int_list(args.substr(1, args.size() - 2), spec));
    }
    throw std::invalid_argument("unknown array kind '" + std::string(kind) + "'");
}

int CoarrayStructure::weight(int lag) const {
    if (lag < -max_lag || lag > max_lag) return 0;
    return weights_by_lag[static_cast<std::size_t>(lag + max_lag)];
}

CoarrayStructure coarray_structure(const SensorArray& array) {
    CoarrayStructure c;
    const auto pos = array.positions();
    const int p = static_cast<int>(pos.size());
    c.num_sensors = pos.size();
    c.max_lag = pos.back() - pos.front();
    c.weights_by_lag.assign(static_cast<std::size_t>(2 * c.max_lag + 1), 0);
    for (int n = 0; n < p; ++n) {
        for (int m = 0; m < p; ++m) {
            ++c.weights_by_lag[static_cast<std::size_t>(pos[m] - pos[n] + c.max_lag)];
        }
    }
    for (int i = -c.max_lag; i <= c.max_lag; ++i) {
        if (c.weights_by_lag[static_cast<std::size_t>(i + c.max_lag)] > 0) {
            c.difference_set.push_back(i);
        }
    }
    c.m_ca = 0;
    while (c.m_ca < c.max_lag && c.weight(c.m_ca + 1) > 0) ++c.m_ca;
    c.hole_free = (c.m_ca == c.max_lag);

    c.pairs_by_lag.resize(static_cast<std::size_t>(c.m_ca + 1));
    for (int n = 0; n < p; ++n) {
        for (int m = 0; m < p; ++m) {
            const int lag = pos[m] - pos[n];
            if (lag >= 0 && lag <= c.m_ca) {
                c.pairs_by_lag[static_cast<std::size_t>(lag)].push_back({m, n});
            }
        }
    }
    return c;
}

double redundancy_coefficient(const CoarrayStructure& c) {
    if (!c.hole_free) throw NotHoleFree("redundancy_coefficient");
    double sum = 0;
    for (int i = 0; i <= c.m_ca; ++i) sum += 1.0 / c.weight(i);
    return sum;
}

RMatrix averaging_matrix(const CoarrayStructure& c, const SensorArray& array) {
    if (!c.hole_free) throw NotHoleFree("averaging_matrix");
    const auto pos = array.positions();
    const Eigen::Index p = static_cast<Eigen::Index>(pos.size());
    RMatrix f = RMatrix::Zero(2 * c.m_ca + 1, p * p);
    for (Eigen::Index n = 0; n < p; ++n) {
        for (Eigen::Index m = 0; m < p; ++m) {
            const int lag = pos[m] - pos[n];
            f(lag + c.m_ca, m + p * n) = 1.0 / c.weight(lag);
        }
    }
    return f;
}

}  // namespace coarray
