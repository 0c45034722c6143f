#ifndef MTRPP_INSTANCE_HPP
#define MTRPP_INSTANCE_HPP

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtrpp/rng.hpp"

namespace mtrpp {

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& what_)
        : std::runtime_error("parse error at line " + std::to_string(line_) + ": " + what_),
          line(line_) {}
};

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what_)
        : std::runtime_error("validation error: " + what_) {}
};

/// Immutable problem data. Vertex 0 is the depot, customers are 1..n.
/// Safe to share across concurrently running solver instances.
struct Instance {
    std::string name;
    int n = 0;        // number of customers
    int servers = 1;  // number of routes (K)
    std::vector<double> profits;                 // profits[i-1] = p_i, i in 1..n
    std::vector<double> d;                       // (n+1)x(n+1) row-major distance matrix
    std::vector<std::array<double, 2>> coords;   // size n+1 when built from coordinates
    bool has_coords = false;
    bool metric = false;           // triangle inequality (asserted by sampled check)
    bool clamped_profits = false;  // generator hit a degenerate profit bound
    std::optional<double> ub;      // optional literature upper bound, reporting only

    double dist(int i, int j) const { return d[static_cast<size_t>(i) * (n + 1) + j]; }
    double profit(int v) const { return profits[static_cast<size_t>(v) - 1]; }
    double total_profit() const {
        double s = 0;
        for (double p : profits) s += p;
        return s;
    }
};

/// Sampled triangle-inequality check: d(a,c) <= d(a,b) + d(b,c) on random
/// triples, with a small relative slack for floating-point Euclidean matrices.
inline bool check_metric(const Instance& inst, int trials = 10000,
                         std::uint64_t seed = 0x5eedULL) {
    if (inst.n + 1 < 3) return true;
    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        const int a = rng.uniform_index(inst.n + 1);
        const int b = rng.uniform_index(inst.n + 1);
        const int c = rng.uniform_index(inst.n + 1);
        const double direct = inst.dist(a, c);
        const double via = inst.dist(a, b) + inst.dist(b, c);
        if (direct > via + 1e-12 * (1.0 + via)) return false;
    }
    return true;
}

/// Throws ValidationError naming the first violated invariant.
inline void validate_instance(const Instance& inst) {
    if (inst.n < 1) throw ValidationError("SIZE must be >= 1");
    if (inst.servers < 1) throw ValidationError("SERVERS must be >= 1 (K >= 1)");
    if (static_cast<int>(inst.profits.size()) != inst.n)
        throw ValidationError("PROFITS count does not match SIZE");
    const size_t dim = static_cast<size_t>(inst.n) + 1;
    if (inst.d.size() != dim * dim) throw ValidationError("distance matrix has wrong shape");
    for (int i = 0; i <= inst.n; ++i) {
        if (inst.dist(i, i) != 0.0)
            throw ValidationError("nonzero diagonal at vertex " + std::to_string(i));
        for (int j = i + 1; j <= inst.n; ++j) {
            if (inst.dist(i, j) != inst.dist(j, i))
                throw ValidationError("asymmetry between vertices " + std::to_string(i) +
                                      " and " + std::to_string(j));
            if (inst.dist(i, j) < 0.0)
                throw ValidationError("negative distance between vertices " +
                                      std::to_string(i) + " and " + std::to_string(j));
        }
    }
    for (int v = 1; v <= inst.n; ++v) {
        if (inst.profit(v) < 0.0)
            throw ValidationError("negative profit for customer " + std::to_string(v));
    }
    if (inst.has_coords) {
        if (inst.coords.size() != dim) throw ValidationError("coordinate count mismatch");
        for (int i = 0; i <= inst.n; ++i) {
            for (int j = 0; j <= inst.n; ++j) {
                const double dx = inst.coords[i][0] - inst.coords[j][0];
                const double dy = inst.coords[i][1] - inst.coords[j][1];
                if (inst.dist(i, j) != std::sqrt(dx * dx + dy * dy))
                    throw ValidationError("distance does not match coordinates for (" +
                                          std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
}

inline void fill_distances_from_coords(Instance& inst) {
    const size_t dim = static_cast<size_t>(inst.n) + 1;
    inst.d.assign(dim * dim, 0.0);
    for (int i = 0; i <= inst.n; ++i) {
        for (int j = 0; j <= inst.n; ++j) {
            const double dx = inst.coords[i][0] - inst.coords[j][0];
            const double dy = inst.coords[i][1] - inst.coords[j][1];
            inst.d[static_cast<size_t>(i) * dim + j] = std::sqrt(dx * dx + dy * dy);
        }
    }
}

namespace detail {

inline std::string format_double(double x) {
    std::array<char, 40> buf{};
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    (void)ec;
    return std::string(buf.data(), p);
}

inline double parse_double(const std::string& tok, int line) {
    double x = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw ParseError(line, "expected a number, got '" + tok + "'");
    return x;
}

inline long long parse_int(const std::string& tok, int line) {
    long long x = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw ParseError(line, "expected an integer, got '" + tok + "'");
    return x;
}

inline std::vector<std::string> tokenize(const std::string& raw) {
    std::string s = raw;
    if (auto pos = s.find('#'); pos != std::string::npos) s.resize(pos);
    std::istringstream is(s);
    std::vector<std::string> toks;
    std::string t;
    while (is >> t) toks.push_back(t);
    return toks;
}

}  // namespace detail

/// Canonical text format, one record per line:
///   MTRPP 1
///   NAME <s>
///   SIZE <n>
///   SERVERS <K>
///   UB <real>              (optional)
///   PROFITS <p_1 ... p_n>
///   EDGE COORD|MATRIX
/// followed by n+1 lines "id x y" (id 0 = depot, first) or n+1 rows of n+1
/// reals. Whitespace-separated; '#' starts a comment.
inline Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);

    Instance inst;
    inst.name = path;
    bool saw_header = false, saw_size = false, saw_servers = false, saw_profits = false;
    std::string edge_mode;

    std::string raw;
    int line = 0;
    auto next_tokens = [&](std::vector<std::string>& toks) -> bool {
        while (std::getline(in, raw)) {
            ++line;
            toks = detail::tokenize(raw);
            if (!toks.empty()) return true;
        }
        return false;
    };

    std::vector<std::string> toks;
    while (next_tokens(toks)) {
        const std::string& key = toks[0];
        if (!saw_header) {
            if (key != "MTRPP" || toks.size() != 2 || toks[1] != "1")
                throw ParseError(line, "missing 'MTRPP 1' header");
            saw_header = true;
            continue;
        }
        if (key == "NAME") {
            if (toks.size() != 2) throw ParseError(line, "NAME expects one token");
            inst.name = toks[1];
        } else if (key == "SIZE") {
            if (toks.size() != 2) throw ParseError(line, "SIZE expects one integer");
            inst.n = static_cast<int>(detail::parse_int(toks[1], line));
            saw_size = true;
        } else if (key == "SERVERS") {
            if (toks.size() != 2) throw ParseError(line, "SERVERS expects one integer");
            inst.servers = static_cast<int>(detail::parse_int(toks[1], line));
            saw_servers = true;
        } else if (key == "UB") {
            if (toks.size() != 2) throw ParseError(line, "UB expects one number");
            inst.ub = detail::parse_double(toks[1], line);
        } else if (key == "PROFITS") {
            if (!saw_size) throw ParseError(line, "PROFITS before SIZE");
            if (static_cast<int>(toks.size()) != inst.n + 1)
                throw ParseError(line, "PROFITS expects " + std::to_string(inst.n) + " numbers");
            inst.profits.clear();
            for (int i = 1; i <= inst.n; ++i)
                inst.profits.push_back(detail::parse_double(toks[i], line));
            saw_profits = true;
        } else if (key == "EDGE") {
            if (!saw_size) throw ParseError(line, "EDGE before SIZE");
            if (toks.size() != 2 || (toks[1] != "COORD" && toks[1] != "MATRIX"))
                throw ParseError(line, "EDGE expects COORD or MATRIX");
            edge_mode = toks[1];
            const int dim = inst.n + 1;
            if (edge_mode == "COORD") {
                inst.coords.assign(dim, {0.0, 0.0});
                for (int i = 0; i < dim; ++i) {
                    if (!next_tokens(toks)) throw ParseError(line, "missing coordinate row");
                    if (toks.size() != 3) throw ParseError(line, "coordinate row expects 'id x y'");
                    if (detail::parse_int(toks[0], line) != i)
                        throw ParseError(line, "coordinate rows must be ordered 0.." +
                                                   std::to_string(inst.n));
                    inst.coords[i] = {detail::parse_double(toks[1], line),
                                      detail::parse_double(toks[2], line)};
                }
                inst.has_coords = true;
                fill_distances_from_coords(inst);
            } else {
                inst.d.assign(static_cast<size_t>(dim) * dim, 0.0);
                for (int i = 0; i < dim; ++i) {
                    if (!next_tokens(toks)) throw ParseError(line, "missing matrix row");
                    if (static_cast<int>(toks.size()) != dim)
                        throw ParseError(line, "matrix row expects " + std::to_string(dim) +
                                                   " numbers");
                    for (int j = 0; j < dim; ++j)
                        inst.d[static_cast<size_t>(i) * dim + j] =
                            detail::parse_double(toks[j], line);
                }
            }
        } else {
            throw ParseError(line, "unknown record '" + key + "'");
        }
    }
    if (!saw_header) throw ParseError(line, "empty file");
    if (!saw_size) throw ParseError(line, "missing SIZE");
    if (!saw_servers) throw ParseError(line, "missing SERVERS");
    if (!saw_profits) throw ParseError(line, "missing PROFITS");
    if (edge_mode.empty()) throw ParseError(line, "missing EDGE section");

    validate_instance(inst);
    inst.metric = inst.has_coords ? true : check_metric(inst);
    return inst;
}

/// Writes the canonical format. Numbers use shortest round-trip formatting,
/// so MATRIX files survive save/load bit-exactly.
inline void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write instance file: " + path);
    out << "MTRPP 1\n";
    out << "NAME " << inst.name << "\n";
    out << "SIZE " << inst.n << "\n";
    out << "SERVERS " << inst.servers << "\n";
    if (inst.ub) out << "UB " << detail::format_double(*inst.ub) << "\n";
    out << "PROFITS";
    for (double p : inst.profits) out << ' ' << detail::format_double(p);
    out << "\n";
    if (inst.has_coords) {
        out << "EDGE COORD\n";
        for (int i = 0; i <= inst.n; ++i)
            out << i << ' ' << detail::format_double(inst.coords[i][0]) << ' '
                << detail::format_double(inst.coords[i][1]) << "\n";
    } else {
        out << "EDGE MATRIX\n";
        for (int i = 0; i <= inst.n; ++i) {
            for (int j = 0; j <= inst.n; ++j) {
                if (j) out << ' ';
                out << detail::format_double(inst.dist(i, j));
            }
            out << "\n";
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

/// Random Euclidean instance: depot and n customers uniform in
/// [0, coord_range]^2, integer profit for customer i uniform in
/// [ceil(d_{0,i}), ceil((n/k) * mean-edge-distance)]. The mean runs over all
/// (n+1)*n/2 undirected edges, depot edges included. Pure function of seed.
inline Instance gen_instance(int n, int k, double coord_range, std::uint64_t seed) {
    if (n < 1) throw ValidationError("gen_instance: n must be >= 1");
    if (k < 1) throw ValidationError("gen_instance: k must be >= 1");
    if (coord_range <= 0) throw ValidationError("gen_instance: coord_range must be positive");

    Instance inst;
    inst.n = n;
    inst.servers = k;
    inst.name = "gen_n" + std::to_string(n) + "_k" + std::to_string(k) + "_s" +
                std::to_string(seed);
    Rng rng(seed);
    inst.coords.resize(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        const double x = rng.uniform_real(0.0, coord_range);
        const double y = rng.uniform_real(0.0, coord_range);
        inst.coords[i] = {x, y};
    }
    inst.has_coords = true;
    fill_distances_from_coords(inst);

    double edge_sum = 0;
    for (int i = 0; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) edge_sum += inst.dist(i, j);
    const double edge_count = static_cast<double>(n + 1) * n / 2.0;
    const auto hi = static_cast<std::int64_t>(
        std::ceil(static_cast<double>(n) / k * (edge_sum / edge_count)));

    inst.profits.resize(n);
    for (int i = 1; i <= n; ++i) {
        const auto lo = static_cast<std::int64_t>(std::ceil(inst.dist(0, i)));
        if (lo > hi) {
            inst.profits[i - 1] = static_cast<double>(lo);
            inst.clamped_profits = true;
        } else {
            inst.profits[i - 1] = static_cast<double>(rng.uniform_int(lo, hi));
        }
    }
    inst.metric = true;
    validate_instance(inst);
    return inst;
}

}  // namespace mtrpp

#endif
