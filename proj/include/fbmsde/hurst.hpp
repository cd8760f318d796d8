#pragma once

#include <stdexcept>

namespace fbmsde {

/// Hurst exponent restricted to the rough regime H in (0, 1/2), together
/// with the flag for the strong-uniqueness regime H < 1/(2(3d-1)) in spatial
/// dimension d.
class HurstParam {
  public:
    explicit HurstParam(double h, int dim = 1) { set(h, dim); }

    double h() const { return h_; }
    int dim() const { return dim_; }
    bool uniqueness_ok() const { return uniqueness_ok_; }

    void set_dim(int dim) { set(h_, dim); }

    static double uniqueness_threshold(int dim) {
        if (dim < 1) throw std::domain_error("HurstParam: dimension must be >= 1");
        return 1.0 / (2.0 * (3.0 * dim - 1.0));
    }

  private:
    void set(double h, int dim) {
        if (!(h > 0.0 && h < 0.5))
            throw std::domain_error("HurstParam: H must lie in the open interval (0, 1/2)");
        if (dim < 1) throw std::domain_error("HurstParam: dimension must be >= 1");
        h_ = h;
        dim_ = dim;
        uniqueness_ok_ = h < uniqueness_threshold(dim);
    }

    double h_;
    int dim_;
    bool uniqueness_ok_;
};

}  // namespace fbmsde
