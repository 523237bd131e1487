#include "rsv/tensor.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace rsv {

double Tensor4::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

double max_abs_difference(const Tensor4& a, const Tensor4& b) {
    assert(a.dim() == b.dim());
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

}  // namespace rsv
