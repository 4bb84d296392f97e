#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "mnewt/sym_matrix.hpp"

namespace mnewt {

/// Matrix text format: first line is the dimension n, followed by n lines of
/// n whitespace-separated reals. Symmetry is checked on load (1e-12 relative).
inline SymMatrix load_matrix(std::istream& in) {
    long n = 0;
    if (!(in >> n)) throw std::runtime_error("load_matrix: missing dimension line");
    if (n < 1) throw std::runtime_error("load_matrix: dimension must be >= 1");
    std::vector<double> entries(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (double& e : entries) {
        if (!(in >> e)) throw std::runtime_error("load_matrix: truncated or malformed entries");
    }
    try {
        return SymMatrix::from_rows(static_cast<std::size_t>(n), entries);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("load_matrix: ") + e.what());
    }
}

inline SymMatrix load_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_matrix: cannot open '" + path + "'");
    return load_matrix(in);
}

inline void save_matrix(std::ostream& out, const SymMatrix& m) {
    out << m.size() << '\n';
    out.precision(17);
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (j) out << ' ';
            out << m(i, j);
        }
        out << '\n';
    }
}

}  // namespace mnewt
