#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ipsep/grid.hpp"

namespace ipsep {

// A finite frame on flat complex vectors: analysis c = Phi* x, synthesis x = Phi c.
class Frame {
 public:
  virtual ~Frame() = default;
  virtual std::size_t signal_size() const = 0;
  virtual std::size_t coeff_size() const = 0;
  virtual void analysis(const cvec& x, cvec& c) const = 0;
  virtual void synthesis(const cvec& c, cvec& x) const = 0;
  // Phi* Phi = I (the frame is an orthonormal basis).
  virtual bool orthonormal() const { return false; }
  // Phi Phi* = I.
  virtual bool parseval() const { return true; }
  virtual std::string name() const = 0;

  cvec analyze(const cvec& x) const;
  cvec synthesize(const cvec& c) const;
};

class IdentityFrame : public Frame {
 public:
  explicit IdentityFrame(std::size_t n) : n_(n) {}
  std::size_t signal_size() const override { return n_; }
  std::size_t coeff_size() const override { return n_; }
  void analysis(const cvec& x, cvec& c) const override;
  void synthesis(const cvec& c, cvec& x) const override;
  bool orthonormal() const override { return true; }
  std::string name() const override { return "identity"; }

 private:
  std::size_t n_;
};

// Dense frame given by its synthesis matrix B (n x k, columns are atoms).
class MatrixFrame : public Frame {
 public:
  MatrixFrame(std::size_t n, std::size_t k, cvec column_major, std::string name);
  std::size_t signal_size() const override { return n_; }
  std::size_t coeff_size() const override { return k_; }
  void analysis(const cvec& x, cvec& c) const override;
  void synthesis(const cvec& c, cvec& x) const override;
  bool orthonormal() const override { return orthonormal_; }
  bool parseval() const override { return parseval_; }
  std::string name() const override { return name_; }
  cplx atom(std::size_t row, std::size_t col) const { return b_[col * n_ + row]; }

  static MatrixFrame dft(std::size_t n);
  static MatrixFrame dct(std::size_t n);
  static MatrixFrame haar(std::size_t n);

 private:
  std::size_t n_, k_;
  cvec b_;
  std::string name_;
  bool orthonormal_ = false;
  bool parseval_ = false;
};

// Frame acting on N x N spatial images (row-major), computed in frequency.
class GridFrame : public Frame {
 public:
  explicit GridFrame(int n);
  int grid() const { return n_; }
  std::size_t signal_size() const override { return static_cast<std::size_t>(n_) * n_; }
  void analysis(const cvec& x, cvec& c) const override;
  void synthesis(const cvec& c, cvec& x) const override;
  // Same operators with the signal given / returned as its centered unitary spectrum.
  virtual void analysis_spectrum(const cvec& fhat, cvec& c) const = 0;
  virtual void synthesis_spectrum(const cvec& c, cvec& fhat) const = 0;
  // Spectrum of the atom with coefficient index i.
  virtual cvec atom_spectrum_at(std::size_t i) const;

 protected:
  int n_;
};

}  // namespace ipsep
