#include "nlgrad/csv.hpp"
#include "nlgrad/variational.hpp"

#include <cstdio>
#include <stdexcept>

namespace nlgrad {

namespace {

struct FileHandle {
    std::FILE* f = nullptr;
    explicit FileHandle(const std::string& path) : f(std::fopen(path.c_str(), "wb")) {
        if (!f) throw std::runtime_error("cannot open for writing: " + path);
    }
    ~FileHandle() {
        if (f) std::fclose(f);
    }
    FileHandle(const FileHandle&) = delete;
    FileHandle& operator=(const FileHandle&) = delete;
};

void put_num(std::FILE* f, double v) { std::fprintf(f, "%.17g", v); }

} // namespace

void write_field_csv(const std::string& path, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& value) {
    if (x.size() != value.size())
        throw std::invalid_argument("field csv: x and value lengths differ");
    FileHandle fh(path);
    std::fprintf(fh.f, "x,value\n");
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        put_num(fh.f, x[i]);
        std::fputc(',', fh.f);
        put_num(fh.f, value[i]);
        std::fputc('\n', fh.f);
    }
}

void write_table_csv(const std::string& path, const std::vector<std::string>& names,
                     const std::vector<Eigen::VectorXd>& columns) {
    if (names.empty() || names.size() != columns.size())
        throw std::invalid_argument("table csv: need one name per column");
    Eigen::Index rows = columns.front().size();
    for (const auto& c : columns)
        if (c.size() != rows) throw std::invalid_argument("table csv: ragged columns");
    FileHandle fh(path);
    for (std::size_t j = 0; j < names.size(); ++j)
        std::fprintf(fh.f, "%s%s", j ? "," : "", names[j].c_str());
    std::fputc('\n', fh.f);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (j) std::fputc(',', fh.f);
            put_num(fh.f, columns[j][i]);
        }
        std::fputc('\n', fh.f);
    }
}

void write_sweep_csv(const std::string& path, const std::vector<LocalizationRow>& rows) {
    FileHandle fh(path);
    std::fprintf(fh.f, "s,l2_error,energy_gap,el_residual\n");
    for (const auto& r : rows) {
        put_num(fh.f, r.s);
        std::fputc(',', fh.f);
        put_num(fh.f, r.l2_error);
        std::fputc(',', fh.f);
        put_num(fh.f, r.energy_gap);
        std::fputc(',', fh.f);
        put_num(fh.f, r.el_residual);
        std::fputc('\n', fh.f);
    }
}

void write_line_svg(const std::string& path, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("svg: need two or more matched points");
    const double W = 800, H = 500, pad = 50;
    double x0 = x.minCoeff(), x1 = x.maxCoeff();
    double y0 = y.minCoeff(), y1 = y.maxCoeff();
    if (x1 <= x0) x1 = x0 + 1;
    if (y1 <= y0) {  // flat data still gets a visible midline
        y0 -= 1;
        y1 += 1;
    }
    auto px = [&](double v) { return pad + (v - x0) / (x1 - x0) * (W - 2 * pad); };
    auto py = [&](double v) { return H - pad - (v - y0) / (y1 - y0) * (H - 2 * pad); };
    FileHandle fh(path);
    std::fprintf(fh.f,
                 "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
                 "viewBox=\"0 0 800 500\">\n"
                 "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n"
                 "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" "
                 "fill=\"none\" stroke=\"#999\" stroke-width=\"1\"/>\n",
                 pad, pad, W - 2 * pad, H - 2 * pad);
    std::fprintf(fh.f, "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" points=\"");
    for (Eigen::Index i = 0; i < x.size(); ++i)
        std::fprintf(fh.f, "%s%.3f,%.3f", i ? " " : "", px(x[i]), py(y[i]));
    std::fprintf(fh.f, "\"/>\n</svg>\n");
}

} // namespace nlgrad
