#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "gvae/error.hpp"

namespace gvae {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);

// Dense row-major float64 array with an optional same-shape gradient
// accumulator. Rank 1 (vectors) and rank 2 (matrices) cover everything the
// models need; higher ranks are representable but no operation produces them.
class Tensor {
  public:
    Tensor() = default;
    explicit Tensor(Shape shape, double fill = 0.0)
        : shape_(std::move(shape)), data_(shape_numel(shape_), fill) {}
    Tensor(Shape shape, std::vector<double> data);

    static Tensor row(std::vector<double> values);
    static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
    static Tensor identity(std::size_t n);

    const Shape& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t numel() const { return data_.size(); }
    std::size_t rows() const { return shape_.empty() ? 0 : shape_[0]; }
    std::size_t cols() const { return shape_.size() < 2 ? 0 : shape_[1]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }
    double& at(std::size_t r, std::size_t c) { return data_[r * shape_[1] + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * shape_[1] + c]; }

    // Gradient accumulator; allocated lazily, zero-filled.
    bool has_grad() const { return !grad_.empty(); }
    std::vector<double>& grad();
    const std::vector<double>& grad() const;
    void zero_grad();
    void drop_grad() { grad_.clear(); }

    bool all_finite() const;

  private:
    Shape shape_;
    std::vector<double> data_;
    std::vector<double> grad_;
};

}  // namespace gvae
