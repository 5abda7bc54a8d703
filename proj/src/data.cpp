#include "gsparse/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace gsparse::data {

namespace {

// Modified Gram-Schmidt over the columns of g (each column holds one row of
// the design matrix), with a second pass for the orthogonality target.
void orthonormalize_columns(linalg::Matrix& g) {
    const std::size_t len = g.rows(), k = g.cols();
    for (std::size_t i = 0; i < k; ++i) {
        double* vi = g.col(i);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < i; ++j) {
                const double* vj = g.col(j);
                double proj = 0.0;
                for (std::size_t t = 0; t < len; ++t) proj += vj[t] * vi[t];
                for (std::size_t t = 0; t < len; ++t) vi[t] -= proj * vj[t];
            }
        }
        double nrm = 0.0;
        for (std::size_t t = 0; t < len; ++t) nrm += vi[t] * vi[t];
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) throw std::runtime_error("generate_synthetic: rank-deficient draw");
        for (std::size_t t = 0; t < len; ++t) vi[t] /= nrm;
    }
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.push_back("");
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

SyntheticInstance generate_synthetic(const SyntheticSpec& spec) {
    if (spec.m <= 0 || spec.n <= 0 || spec.group_size <= 0)
        throw std::invalid_argument("generate_synthetic: dimensions must be positive");
    if (spec.n % spec.group_size != 0)
        throw std::invalid_argument("generate_synthetic: n not divisible by group_size");
    const int d = spec.n / spec.group_size;
    if (spec.k_active < 0 || spec.k_active > d)
        throw std::invalid_argument("generate_synthetic: k_active exceeds group count");
    if (spec.m > spec.n)
        throw std::invalid_argument("generate_synthetic: m > n cannot have orthonormal rows");

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss;

    // Rows of A are stored as contiguous columns of g for the
    // orthonormalization, then transposed out.
    linalg::Matrix g(static_cast<std::size_t>(spec.n), static_cast<std::size_t>(spec.m));
    for (auto& v : g.data()) v = gauss(rng);
    orthonormalize_columns(g);

    SyntheticInstance inst;
    inst.a = linalg::Matrix(static_cast<std::size_t>(spec.m), static_cast<std::size_t>(spec.n));
    for (std::size_t i = 0; i < static_cast<std::size_t>(spec.m); ++i)
        for (std::size_t j = 0; j < static_cast<std::size_t>(spec.n); ++j)
            inst.a(i, j) = g(j, i);

    std::vector<int> groups(static_cast<std::size_t>(d));
    std::iota(groups.begin(), groups.end(), 0);
    std::shuffle(groups.begin(), groups.end(), rng);
    groups.resize(static_cast<std::size_t>(spec.k_active));
    std::sort(groups.begin(), groups.end());

    inst.x_true.assign(static_cast<std::size_t>(spec.n), 0.0);
    for (int gi : groups)
        for (int j = 0; j < spec.group_size; ++j)
            inst.x_true[static_cast<std::size_t>(gi * spec.group_size + j)] = gauss(rng);

    inst.y.resize(static_cast<std::size_t>(spec.m));
    linalg::mat_vec(inst.a, inst.x_true, inst.y);
    for (auto& yi : inst.y) yi += spec.noise_std * gauss(rng);

    inst.partition = GroupPartition::uniform(spec.n, spec.group_size);
    return inst;
}

Dataset read_libsvm(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_libsvm: cannot open " + path);
    std::vector<double> labels;
    std::vector<std::vector<std::pair<int, double>>> rows;
    int max_index = 0;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        double label;
        if (!(ss >> label))
            throw std::runtime_error("read_libsvm: bad label at line " + std::to_string(lineno));
        std::vector<std::pair<int, double>> row;
        std::string tok;
        while (ss >> tok) {
            const auto colon = tok.find(':');
            if (colon == std::string::npos)
                throw std::runtime_error("read_libsvm: bad feature token '" + tok +
                                         "' at line " + std::to_string(lineno));
            int idx;
            double val;
            try {
                idx = std::stoi(tok.substr(0, colon));
                val = std::stod(tok.substr(colon + 1));
            } catch (const std::exception&) {
                throw std::runtime_error("read_libsvm: bad feature token '" + tok +
                                         "' at line " + std::to_string(lineno));
            }
            if (idx < 1)
                throw std::runtime_error("read_libsvm: index must be >= 1 at line " +
                                         std::to_string(lineno));
            row.emplace_back(idx, val);
            max_index = std::max(max_index, idx);
        }
        labels.push_back(label);
        rows.push_back(std::move(row));
    }
    if (labels.empty()) throw std::runtime_error("read_libsvm: no samples in " + path);

    Dataset ds;
    ds.x = linalg::Matrix(labels.size(), static_cast<std::size_t>(max_index));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (const auto& [idx, val] : rows[i]) ds.x(i, static_cast<std::size_t>(idx - 1)) = val;
    ds.y = std::move(labels);
    return ds;
}

void write_libsvm(const std::string& path, const linalg::Matrix& x,
                  const std::vector<double>& y) {
    if (x.rows() != y.size()) throw std::invalid_argument("write_libsvm: row count mismatch");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_libsvm: cannot open " + path);
    out.precision(17);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        out << y[i];
        for (std::size_t j = 0; j < x.cols(); ++j)
            if (x(i, j) != 0.0) out << ' ' << (j + 1) << ':' << x(i, j);
        out << '\n';
    }
}

Dataset read_csv(const std::string& path, const std::string& target_column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_csv: empty file " + path);
    const auto header = split(trim(line), ',');
    int target_idx = -1;
    std::vector<std::string> names;
    for (std::size_t j = 0; j < header.size(); ++j) {
        const std::string name = trim(header[j]);
        if (name == target_column)
            target_idx = static_cast<int>(j);
        else
            names.push_back(name);
    }
    if (target_idx < 0)
        throw std::runtime_error("read_csv: target column '" + target_column + "' not found");

    std::vector<std::vector<double>> rows;
    std::vector<double> targets;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != header.size())
            throw std::runtime_error("read_csv: wrong cell count at line " +
                                     std::to_string(lineno));
        std::vector<double> row;
        row.reserve(cells.size() - 1);
        for (std::size_t j = 0; j < cells.size(); ++j) {
            double v;
            try {
                v = std::stod(trim(cells[j]));
            } catch (const std::exception&) {
                throw std::runtime_error("read_csv: non-numeric cell at line " +
                                         std::to_string(lineno) + ", column " +
                                         std::to_string(j + 1));
            }
            if (static_cast<int>(j) == target_idx)
                targets.push_back(v);
            else
                row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("read_csv: no data rows in " + path);

    Dataset ds;
    ds.x = linalg::Matrix(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) ds.x(i, j) = rows[i][j];
    ds.y = std::move(targets);
    ds.feature_names = std::move(names);
    return ds;
}

ExpandedData polynomial_group_expand(const Dataset& dataset, int degree) {
    if (degree < 2) throw std::invalid_argument("polynomial_group_expand: degree must be >= 2");
    const std::size_t m = dataset.x.rows();

    // Drop constant raw columns before pairing.
    std::vector<int> keep;
    for (std::size_t j = 0; j < dataset.x.cols(); ++j) {
        const double* col = dataset.x.col(j);
        const double first = col[0];
        bool constant = true;
        for (std::size_t i = 1; i < m; ++i)
            if (col[i] != first) {
                constant = false;
                break;
            }
        if (constant)
            std::cerr << "polynomial_group_expand: dropping constant column " << j << "\n";
        else
            keep.push_back(static_cast<int>(j));
    }
    const int r = static_cast<int>(keep.size());
    if (r < 2) throw std::invalid_argument("polynomial_group_expand: need at least 2 varying columns");

    const std::size_t n_pairs = static_cast<std::size_t>(r) * (r - 1) / 2;
    linalg::Matrix a(m, n_pairs * 5);
    std::size_t colidx = 0;
    for (int pj = 0; pj < r; ++pj) {
        for (int pl = pj + 1; pl < r; ++pl) {
            const double* xj = dataset.x.col(static_cast<std::size_t>(keep[static_cast<std::size_t>(pj)]));
            const double* xl = dataset.x.col(static_cast<std::size_t>(keep[static_cast<std::size_t>(pl)]));
            double* c0 = a.col(colidx + 0);
            double* c1 = a.col(colidx + 1);
            double* c2 = a.col(colidx + 2);
            double* c3 = a.col(colidx + 3);
            double* c4 = a.col(colidx + 4);
            for (std::size_t i = 0; i < m; ++i) {
                c0[i] = xj[i] * xl[i];
                c1[i] = xj[i] * xj[i] * xl[i];
                c2[i] = xj[i] * xl[i] * xl[i];
                c3[i] = xj[i] * xj[i];
                c4[i] = xl[i] * xl[i];
            }
            colidx += 5;
        }
    }

    // Center, then scale to unit l2 norm; degenerate columns stay zero.
    for (std::size_t j = 0; j < a.cols(); ++j) {
        double* col = a.col(j);
        double mean = 0.0;
        for (std::size_t i = 0; i < m; ++i) mean += col[i];
        mean /= static_cast<double>(m);
        double nrm = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            col[i] -= mean;
            nrm += col[i] * col[i];
        }
        nrm = std::sqrt(nrm);
        if (nrm > 0.0)
            for (std::size_t i = 0; i < m; ++i) col[i] /= nrm;
    }

    ExpandedData out;
    out.partition = GroupPartition::uniform(static_cast<int>(a.cols()), 5);
    out.a = std::move(a);
    return out;
}

SyntheticSpec parse_synthetic_spec(const std::string& text) {
    SyntheticSpec spec;
    std::string normalized = text;
    std::replace(normalized.begin(), normalized.end(), ',', '\n');
    std::istringstream ss(normalized);
    std::string line;
    while (std::getline(ss, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("synthetic spec: expected key=value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        try {
            if (key == "m") spec.m = std::stoi(val);
            else if (key == "n") spec.n = std::stoi(val);
            else if (key == "group_size") spec.group_size = std::stoi(val);
            else if (key == "k_active" || key == "k") spec.k_active = std::stoi(val);
            else if (key == "noise_std" || key == "sigma") spec.noise_std = std::stod(val);
            else if (key == "seed") spec.seed = std::stoull(val);
            else throw std::invalid_argument("synthetic spec: unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            throw std::invalid_argument("synthetic spec: bad value for '" + key + "'");
        }
    }
    return spec;
}

SyntheticSpec read_synthetic_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open synthetic spec file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_synthetic_spec(buf.str());
}

}  // namespace gsparse::data
