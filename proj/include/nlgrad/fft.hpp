#pragma once
#include <complex>
#include <stdexcept>
#include <vector>

namespace nlgrad {

// In-place iterative radix-2 transform. Power-of-two lengths only; reentrant.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

std::vector<std::complex<double>> fft(const std::vector<std::complex<double>>& a);
std::vector<std::complex<double>> ifft(const std::vector<std::complex<double>>& a);

inline bool is_pow2(long n) { return n > 0 && (n & (n - 1)) == 0; }

} // namespace nlgrad
