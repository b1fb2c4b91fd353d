#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace dd {

// In-place complex DFT of a fixed size. Power-of-two sizes use an iterative
// radix-2 transform with precomputed twiddles; other sizes fall back to a
// direct O(n^2) evaluation. Immutable after construction; the transform
// methods only touch caller-provided buffers and are safe to call from
// multiple threads.
class Fft {
 public:
  explicit Fft(std::size_t n);

  std::size_t size() const { return n_; }

  // X[k] = sum_l x[l] e^{-2·pi·i·k·l/n}
  void forward(std::complex<double>* data) const;
  // x[l] = sum_k X[k] e^{+2·pi·i·k·l/n}  (unnormalized)
  void inverse(std::complex<double>* data) const;

 private:
  void transform(std::complex<double>* data, bool conjugate) const;

  std::size_t n_;
  bool pow2_;
  std::vector<std::complex<double>> twiddle_;  // e^{-2·pi·i·j/n}, j < n/2 (radix-2)
  std::vector<std::size_t> bitrev_;
  std::vector<std::complex<double>> roots_;    // e^{-2·pi·i·j/n}, j < n (direct)
};

}  // namespace dd
