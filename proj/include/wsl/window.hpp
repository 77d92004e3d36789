#pragma once

namespace wsl {

/// Superlevel window I_k = {s : f(s) >= 1/k}, a connected interval.
struct IkWindow {
    int k = 0;
    double a_k = 0.0;
    double b_k = 0.0;
    double width() const { return b_k - a_k; }
};

}  // namespace wsl
