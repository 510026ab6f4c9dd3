// Shared helpers for the test suites: small statistics utilities, a radix-2
// FFT for periodograms, series analysis, and a subprocess runner for CLI
// round trips.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "rpkubo/estimators.hpp"
#include "rpkubo/model.hpp"

namespace testutil {

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

// Standard error of the mean via block averaging (handles autocorrelation).
inline double blocked_stderr(const std::vector<double>& v, std::size_t n_blocks = 32) {
    const std::size_t n = v.size();
    std::vector<double> bm;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        const std::size_t lo = b * n / n_blocks, hi = (b + 1) * n / n_blocks;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        bm.push_back(s / static_cast<double>(hi - lo));
    }
    const double m = mean(bm);
    double var = 0.0;
    for (double x : bm) var += (x - m) * (x - m);
    var /= (n_blocks - 1);
    return std::sqrt(var / n_blocks);
}

// In-place radix-2 FFT (n must be a power of two).
inline void fft(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

// Angular frequency of the dominant periodogram peak of a real signal sampled
// at spacing dt (DC excluded).
inline double dominant_frequency(const std::vector<double>& signal, double dt) {
    std::size_t n = 1;
    while (2 * n <= signal.size()) n *= 2;
    std::vector<std::complex<double>> buf(signal.begin(), signal.begin() + n);
    fft(buf);
    std::size_t best = 1;
    for (std::size_t k = 2; k < n / 2; ++k)
        if (std::abs(buf[k]) > std::abs(buf[best])) best = k;
    return 2.0 * std::numbers::pi * static_cast<double>(best) / (static_cast<double>(n) * dt);
}

// Kolmogorov-Smirnov statistic of samples against a zero-mean Gaussian CDF.
inline double ks_statistic_gaussian(std::vector<double> samples, double sigma) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double cdf = 0.5 * std::erfc(-samples[i] / (sigma * std::numbers::sqrt2));
        d = std::max(d, std::abs((i + 1) / n - cdf));
        d = std::max(d, std::abs(cdf - i / n));
    }
    return d;
}

// (max - min) of series values over the time window [lo, hi].
inline double peak_to_trough(const rpkubo::CorrelationSeries& s, double lo, double hi) {
    double mn = 1e300, mx = -1e300;
    for (std::size_t k = 0; k < s.times.size(); ++k)
        if (s.times[k] >= lo - 1e-12 && s.times[k] <= hi + 1e-12) {
            mn = std::min(mn, s.values[k]);
            mx = std::max(mx, s.values[k]);
        }
    return mx - mn;
}

// Fraction of the first-period oscillation swing retained in the last full
// period of the series (period = pi/omega for a 2*omega oscillation).
inline double envelope_retained(const rpkubo::CorrelationSeries& s, double omega = 1.0) {
    const double period = std::numbers::pi / omega;
    const double t_end = s.times.back();
    return peak_to_trough(s, t_end - period, t_end) / peak_to_trough(s, 0.0, period);
}

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

inline CliResult run_cli(const std::string& args) {
#ifdef RPKUBO_CLI_BIN
    const std::string cmd = std::string(RPKUBO_CLI_BIN) + " " + args + " 2>&1";
#else
    const std::string cmd = "rpkubo " + args + " 2>&1";
#endif
    CliResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return res;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof(buf), pipe)) res.output.append(buf, n);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

struct CsvFile {
    std::string meta_line;
    std::vector<double> t, value, std_error;
};

inline CsvFile read_csv(const std::string& path) {
    CsvFile csv;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("# meta: ", 0) == 0) {
            csv.meta_line = line.substr(8);
            continue;
        }
        if (line.empty() || line[0] == 't') continue;
        std::istringstream ls(line);
        std::string tok;
        std::array<double, 3> row{};
        for (int i = 0; i < 3 && std::getline(ls, tok, ','); ++i) row[static_cast<std::size_t>(i)] = std::stod(tok);
        csv.t.push_back(row[0]);
        csv.value.push_back(row[1]);
        csv.std_error.push_back(row[2]);
    }
    return csv;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace testutil
