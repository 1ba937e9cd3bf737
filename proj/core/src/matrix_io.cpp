#include "blockade/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace blockade {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_matrix(std::ostream& os, const ComplexMatrix& m) {
    os << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) os << ' ';
            os << format_double(m(i, j).real()) << ' ' << format_double(m(i, j).imag());
        }
        os << '\n';
    }
}

void write_matrix(const std::string& path, const ComplexMatrix& m) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_matrix: cannot open " + path);
    write_matrix(f, m);
}

ComplexMatrix read_matrix(std::istream& is) {
    Eigen::Index rows, cols;
    if (!(is >> rows >> cols) || rows < 1 || cols < 1)
        throw std::runtime_error("read_matrix: bad header");
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
            double re, im;
            if (!(is >> re >> im)) throw std::runtime_error("read_matrix: truncated data");
            m(i, j) = Complex(re, im);
        }
    return m;
}

ComplexMatrix read_matrix(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("read_matrix: cannot open " + path);
    return read_matrix(f);
}

void write_vector(const std::string& path, const ComplexVector& v) {
    write_matrix(path, ComplexMatrix(v));
}

ComplexVector read_vector(const std::string& path) {
    ComplexMatrix m = read_matrix(path);
    if (m.cols() != 1) throw std::runtime_error("read_vector: not a column vector");
    return ComplexVector(m.col(0));
}

} // namespace blockade
