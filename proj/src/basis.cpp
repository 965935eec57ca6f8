#include "vic/basis.hpp"

#include <algorithm>
#include <cctype>

namespace vic {

std::string to_string(BasisFamily family) {
    return family == BasisFamily::LegendreShifted ? "legendre" : "fourier";
}

BasisFamily parse_basis_family(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "legendre") return BasisFamily::LegendreShifted;
    if (lower == "fourier") return BasisFamily::Fourier;
    throw ConfigError("unknown basis family '" + std::string(name) + "' (expected legendre or fourier)");
}

std::vector<std::vector<Int128>> legendre_coeffs(int order) {
    if (order < 0) throw BasisIndexError("Legendre order must be >= 0");
    if (order > kMaxLegendreOrder) {
        throw OrderTooHigh("Legendre order " + std::to_string(order) + " exceeds the limit of " +
                           std::to_string(kMaxLegendreOrder));
    }
    // Pascal triangle up to 2N; C(60, 30) ~ 1.2e17 fits comfortably in 128 bits.
    const int top = 2 * order;
    std::vector<std::vector<Int128>> binom(top + 1);
    for (int i = 0; i <= top; ++i) {
        binom[i].assign(i + 1, 1);
        for (int j = 1; j < i; ++j) binom[i][j] = binom[i - 1][j - 1] + binom[i - 1][j];
    }
    std::vector<std::vector<Int128>> table(order + 1, std::vector<Int128>(order + 1, 0));
    for (int n = 0; n <= order; ++n) {
        for (int k = 0; k <= n; ++k) {
            const Int128 magnitude = binom[n][k] * binom[n + k][k];
            table[n][k] = ((n + k) % 2 == 0) ? magnitude : -magnitude;
        }
    }
    return table;
}

}  // namespace vic
