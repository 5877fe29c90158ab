#pragma once
#include <Eigen/Dense>
#include <string>
#include <vector>

namespace nlgrad {

struct LocalizationRow;

// All writers emit %.17g so a reread reproduces the doubles bit-for-bit and
// reruns of the same config diff clean.

// Header "x,value", one row per node.
void write_field_csv(const std::string& path, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& value);

// Arbitrary named columns of equal length (kernel dumps, diagnostics).
void write_table_csv(const std::string& path, const std::vector<std::string>& names,
                     const std::vector<Eigen::VectorXd>& columns);

// Header "s,l2_error,energy_gap,el_residual".
void write_sweep_csv(const std::string& path, const std::vector<LocalizationRow>& rows);

// Minimal self-contained line plot: fixed 800x500 canvas, one polyline,
// light axis frame. No scripts, no external references.
void write_line_svg(const std::string& path, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& y);

} // namespace nlgrad
