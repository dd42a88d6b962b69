#pragma once

#include <Eigen/SparseCore>
#include <string>
#include <vector>

#include "plate/common.hpp"

namespace plate::io {

/// 12 significant digits, locale-independent; reruns are byte-identical.
std::string format_sig(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Debug export of the assembled system.
void write_matrix_market(const std::string& path,
                         const Eigen::SparseMatrix<Complex>& A);

}  // namespace plate::io
