#pragma once

#include "coh/congruence.hpp"
#include "coh/groups.hpp"
#include "coh/hecke.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace coh::cli {

inline constexpr const char* kSchema = "coh-cli/1";

enum class Format { Csv, Json };

struct RunConfig {
    std::string command;
    std::string group = "bianchi:-1";
    long d = -1;
    int n_lo = 0, n_hi = 0;
    std::uint64_t x = 100;
    std::uint64_t qbound = 500;  ///< coefficient primes for scans
    std::string pi;
    std::vector<long> nl;  ///< monic quadratic, descending coefficients
    std::vector<std::string> restrict_to;
    std::string output;  ///< empty = stdout
    std::string results;  ///< scan checkpoint file
    Format format = Format::Csv;
    unsigned threads = 1;

    /// Throws std::invalid_argument on an empty weight range or x < 2.
    void validate() const;
};

/// "a..b" or a single integer.
std::pair<int, int> parse_range(const std::string& s);

/// Computations that yield no value at all (no admissible prime <= x).
struct Degenerate : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimRow {
    int n = 0;
    std::size_t dim = 0;
    std::vector<std::uint64_t> witnesses;
};

struct BcRow {
    int n = 0;
    long bc = 0, codim = 0;
};

struct CompareRow {
    int n = 0;
    std::size_t computed = 0;
    long predicted = 0;  ///< bc + cusp codimension
    long gap() const { return static_cast<long>(computed) - predicted; }
};

struct HeckeReport {
    HeckeOperator op;
    bool real_rooted = false;
    std::optional<std::vector<BigInt>> nl_q;
    std::vector<std::pair<QuadElement, NLRestriction>> restrictions;
};

/// Throws UnsupportedKey for an unknown or out-of-range group and Degenerate
/// when some weight has no admissible prime.
std::vector<DimRow> cmd_dim(const RunConfig& c);
std::vector<BcRow> cmd_bc(const RunConfig& c);
std::vector<CompareRow> cmd_compare(const RunConfig& c);
ScanResult cmd_scan(const RunConfig& c);
HeckeReport cmd_hecke(const RunConfig& c);

std::string render_dim(const RunConfig& c, const std::vector<DimRow>& rows);
std::string render_bc(const RunConfig& c, const std::vector<BcRow>& rows);
std::string render_compare(const RunConfig& c, const std::vector<CompareRow>& rows);
std::string render_scan(const RunConfig& c, const ScanResult& r);
std::string render_hecke(const RunConfig& c, const HeckeReport& r);

/// Ascending integer coefficients as "X^2 + 700*X + 40671".
std::string format_poly(const std::vector<BigInt>& asc);

/// Runs c.command and writes the rendered output; returns the exit code.
int run(const RunConfig& c);

}  // namespace coh::cli
