#pragma once

// Dense integer matrices: the (min,+) operands A, B and the boolean OuMv
// matrix M. Row-major storage, 0-based accessors, plus 1-based `at1` for code
// that follows the 1-based gadget indexing.

#include <cstdint>
#include <istream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "planarlb/error.hpp"
#include "planarlb/graph.hpp"

namespace planarlb {

class Matrix {
  public:
    Matrix() = default;
    Matrix(int rows, int cols, Weight fill = 0) : rows_(rows), cols_(cols) {
        if (rows < 0 || cols < 0) throw InvalidArgument("negative matrix dimension");
        data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill);
    }

    static Matrix from_rows(const std::vector<std::vector<Weight>>& rows) {
        const int r = static_cast<int>(rows.size());
        const int c = r == 0 ? 0 : static_cast<int>(rows.front().size());
        Matrix m(r, c);
        for (int i = 0; i < r; ++i) {
            if (static_cast<int>(rows[i].size()) != c) throw InvalidArgument("ragged matrix rows");
            for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    [[nodiscard]] int rows() const { return rows_; }
    [[nodiscard]] int cols() const { return cols_; }
    [[nodiscard]] bool empty() const { return rows_ == 0 || cols_ == 0; }

    Weight& operator()(int i, int j) { return data_[index(i, j)]; }
    [[nodiscard]] Weight operator()(int i, int j) const { return data_[index(i, j)]; }

    [[nodiscard]] Weight at1(int i, int j) const { return (*this)(i - 1, j - 1); }

    [[nodiscard]] Weight max_entry() const {
        Weight m = 0;
        for (Weight v : data_) m = std::max(m, v);
        return m;
    }

    [[nodiscard]] Weight min_entry() const {
        Weight m = data_.empty() ? 0 : data_.front();
        for (Weight v : data_) m = std::min(m, v);
        return m;
    }

    [[nodiscard]] bool is_boolean() const {
        for (Weight v : data_)
            if (v != 0 && v != 1) return false;
        return true;
    }

    [[nodiscard]] const std::vector<Weight>& data() const { return data_; }

    bool operator==(const Matrix&) const = default;

  private:
    [[nodiscard]] std::size_t index(int i, int j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
            throw InvalidArgument("matrix index (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j);
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<Weight> data_;
};

// Entries uniform in [lo, hi].
inline Matrix random_matrix(int rows, int cols, Weight lo, Weight hi, std::mt19937_64& rng) {
    Matrix m(rows, cols);
    std::uniform_int_distribution<Weight> dist(lo, hi);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = dist(rng);
    return m;
}

inline Matrix random_boolean_matrix(int rows, int cols, std::mt19937_64& rng) {
    return random_matrix(rows, cols, 0, 1, rng);
}

// ---------------------------------------------------------------------------
// I/O

inline nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw InvalidArgument("matrix JSON must be an array of rows");
    std::vector<std::vector<Weight>> rows;
    for (const auto& r : j) {
        if (!r.is_array()) throw InvalidArgument("matrix JSON row must be an array");
        std::vector<Weight> row;
        for (const auto& v : r) {
            if (!v.is_number_integer()) throw InvalidArgument("matrix entries must be integers");
            row.push_back(v.get<Weight>());
        }
        rows.push_back(std::move(row));
    }
    return Matrix::from_rows(rows);
}

// Plain-text fixture format: one row per line, entries separated by
// whitespace. Blank lines and lines starting with '#' are ignored.
inline Matrix matrix_from_text(std::istream& in) {
    std::vector<std::vector<Weight>> rows;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::vector<Weight> row;
        std::string tok;
        while (ls >> tok) {
            std::size_t used = 0;
            Weight v{};
            try {
                v = std::stoll(tok, &used);
            } catch (const std::exception&) {
                throw InvalidArgument("not an integer: '" + tok + "'");
            }
            if (used != tok.size()) throw InvalidArgument("not an integer: '" + tok + "'");
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    return Matrix::from_rows(rows);
}

inline std::string matrix_to_text(const Matrix& m) {
    std::ostringstream os;
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
        os << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Digests (FNV-1a, 64-bit)

class Fnv1a {
  public:
    void add(std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h_ ^= (v >> (8 * b)) & 0xffu;
            h_ *= 0x100000001b3ull;
        }
    }
    void add(const Matrix& m) {
        add(static_cast<std::uint64_t>(m.rows()));
        add(static_cast<std::uint64_t>(m.cols()));
        for (Weight v : m.data()) add(static_cast<std::uint64_t>(v));
    }
    [[nodiscard]] std::uint64_t value() const { return h_; }
    [[nodiscard]] std::string hex() const {
        std::ostringstream os;
        os << std::hex;
        os.width(16);
        os.fill('0');
        os << h_;
        return os.str();
    }

  private:
    std::uint64_t h_ = 0xcbf29ce484222325ull;
};

} // namespace planarlb
