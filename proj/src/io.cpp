#include "plate/io.hpp"

#include <cstdio>
#include <fstream>

namespace plate::io {

std::string format_sig(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    for (std::size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 < header.size() ? "," : "\n");
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << format_sig(row[i]) << (i + 1 < row.size() ? "," : "\n");
    }
}

void write_matrix_market(const std::string& path,
                         const Eigen::SparseMatrix<Complex>& A) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "%%MatrixMarket matrix coordinate complex general\n";
    out << A.rows() << " " << A.cols() << " " << A.nonZeros() << "\n";
    for (int k = 0; k < A.outerSize(); ++k)
        for (Eigen::SparseMatrix<Complex>::InnerIterator it(A, k); it; ++it)
            out << it.row() + 1 << " " << it.col() + 1 << " "
                << format_sig(it.value().real()) << " "
                << format_sig(it.value().imag()) << "\n";
}

}  // namespace plate::io
