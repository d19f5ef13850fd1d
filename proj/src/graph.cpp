#include "gvae/graph.hpp"

#include <cmath>
#include <string>

namespace gvae {

struct Var::Node {
    Tensor value;
    std::vector<double> grad;
    std::function<void()> backprop;  // scatters this node's grad into its inputs
    Tensor* bound = nullptr;         // set for param leaves
};

const Tensor& Var::value() const {
    return node_->value;
}

double Var::scalar() const {
    if (node_->value.numel() != 1)
        throw ContractError("scalar() on tensor of shape " + shape_str(shape()));
    return node_->value[0];
}

const std::vector<double>& Var::grad() const {
    return node_->grad;
}

Var::Node& Graph::make_node(Tensor value) {
    Var::Node& n = nodes_.emplace_back();
    n.value = std::move(value);
    n.grad.assign(n.value.numel(), 0.0);
    return n;
}

Var Graph::constant(Tensor value) {
    return Var(&make_node(std::move(value)));
}

Var Graph::constant(std::vector<double> row_values) {
    return constant(Tensor::row(std::move(row_values)));
}

Var Graph::param(Tensor& parameter) {
    Var::Node& n = make_node(parameter);
    n.bound = &parameter;
    return Var(&n);
}

Var Graph::affine(Var input, Var weight, Var bias) {
    const Tensor& x = input.node_->value;
    const Tensor& w = weight.node_->value;
    const Tensor& b = bias.node_->value;
    if (w.rank() != 2)
        throw DimensionError("affine: weight must be rank-2, got " + shape_str(w.shape()));
    if (x.rank() != 1 && x.rank() != 2)
        throw DimensionError("affine: input must be rank-1 or rank-2, got " +
                             shape_str(x.shape()));
    const std::size_t rows = x.rank() == 2 ? x.rows() : 1;
    const std::size_t in_dim = x.rank() == 2 ? x.cols() : x.shape()[0];
    const std::size_t out_dim = w.cols();
    if (in_dim != w.rows())
        throw DimensionError("affine: input inner axis (" + std::to_string(in_dim) +
                             ") does not match weight rows (" + std::to_string(w.rows()) + ")");
    if (b.rank() != 1 || b.shape()[0] != out_dim)
        throw DimensionError("affine: bias axis " + shape_str(b.shape()) +
                             " does not match weight columns (" + std::to_string(out_dim) + ")");

    Tensor out(x.rank() == 2 ? Shape{rows, out_dim} : Shape{out_dim});
    for (std::size_t r = 0; r < rows; ++r) {
        double* orow = out.data() + r * out_dim;
        for (std::size_t o = 0; o < out_dim; ++o) orow[o] = b[o];
        const double* xrow = x.data() + r * in_dim;
        for (std::size_t i = 0; i < in_dim; ++i) {
            const double a = xrow[i];
            const double* wrow = w.data() + i * out_dim;
            for (std::size_t o = 0; o < out_dim; ++o) orow[o] += a * wrow[o];
        }
    }

    Var::Node& n = make_node(std::move(out));
    Var::Node* xn = input.node_;
    Var::Node* wn = weight.node_;
    Var::Node* bn = bias.node_;
    Var::Node* on = &n;
    n.backprop = [xn, wn, bn, on, rows, in_dim, out_dim]() {
        const double* g = on->grad.data();
        const double* xv = xn->value.data();
        const double* wv = wn->value.data();
        for (std::size_t r = 0; r < rows; ++r) {
            const double* grow = g + r * out_dim;
            const double* xrow = xv + r * in_dim;
            double* dxrow = xn->grad.data() + r * in_dim;
            for (std::size_t i = 0; i < in_dim; ++i) {
                const double* wrow = wv + i * out_dim;
                double* dwrow = wn->grad.data() + i * out_dim;
                double acc = 0.0;
                const double a = xrow[i];
                for (std::size_t o = 0; o < out_dim; ++o) {
                    acc += grow[o] * wrow[o];
                    dwrow[o] += a * grow[o];
                }
                dxrow[i] += acc;
            }
            for (std::size_t o = 0; o < out_dim; ++o) bn->grad[o] += grow[o];
        }
    };
    return Var(on);
}

Var Graph::unary(Var x, const char* name,
                 const std::function<double(double)>& f,
                 const std::function<double(double, double)>& df) {
    (void)name;
    const Tensor& xv = x.node_->value;
    Tensor out(xv.shape());
    for (std::size_t i = 0; i < xv.numel(); ++i) out[i] = f(xv[i]);
    Var::Node& n = make_node(std::move(out));
    Var::Node* xn = x.node_;
    Var::Node* on = &n;
    n.backprop = [xn, on, df]() {
        for (std::size_t i = 0; i < on->grad.size(); ++i)
            xn->grad[i] += on->grad[i] * df(xn->value[i], on->value[i]);
    };
    return Var(on);
}

Var Graph::relu(Var x) {
    // subgradient at 0 is 0
    return unary(x, "relu",
                 [](double a) { return a > 0.0 ? a : 0.0; },
                 [](double a, double) { return a > 0.0 ? 1.0 : 0.0; });
}

Var Graph::positivity_map(Var x) {
    const Tensor& xv = x.node_->value;
    for (std::size_t i = 0; i < xv.numel(); ++i)
        if (xv[i] > 1400.0)
            throw RangeError("positivity_map: input " + std::to_string(xv[i]) +
                             " exceeds float64 range guard (1400)");
    return unary(x, "positivity_map",
                 [](double a) { return std::exp(0.5 * a); },
                 [](double, double y) { return 0.5 * y; });
}

Var Graph::clamp(Var x, double lo, double hi) {
    return unary(x, "clamp",
                 [lo, hi](double a) { return a < lo ? lo : (a > hi ? hi : a); },
                 [lo, hi](double a, double) { return (a > lo && a < hi) ? 1.0 : 0.0; });
}

Var Graph::log(Var x) {
    return unary(x, "log",
                 [](double a) { return std::log(a); },
                 [](double a, double) { return 1.0 / a; });
}

Var Graph::sqrt(Var x) {
    return unary(x, "sqrt",
                 [](double a) { return std::sqrt(a); },
                 [](double, double y) { return 0.5 / y; });
}

Var Graph::square(Var x) {
    return unary(x, "square",
                 [](double a) { return a * a; },
                 [](double a, double) { return 2.0 * a; });
}

Var Graph::reciprocal(Var x) {
    return unary(x, "reciprocal",
                 [](double a) { return 1.0 / a; },
                 [](double, double y) { return -y * y; });
}

namespace {
void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
    if (a.shape() != b.shape())
        throw DimensionError(std::string(op) + ": shapes " + shape_str(a.shape()) + " and " +
                             shape_str(b.shape()) + " differ");
}
}  // namespace

Var Graph::add(Var a, Var b) {
    require_same_shape(a.node_->value, b.node_->value, "add");
    Tensor out(a.shape());
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] = a.node_->value[i] + b.node_->value[i];
    Var::Node& n = make_node(std::move(out));
    Var::Node *an = a.node_, *bn = b.node_, *on = &n;
    n.backprop = [an, bn, on]() {
        for (std::size_t i = 0; i < on->grad.size(); ++i) {
            an->grad[i] += on->grad[i];
            bn->grad[i] += on->grad[i];
        }
    };
    return Var(on);
}

Var Graph::sub(Var a, Var b) {
    require_same_shape(a.node_->value, b.node_->value, "sub");
    Tensor out(a.shape());
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] = a.node_->value[i] - b.node_->value[i];
    Var::Node& n = make_node(std::move(out));
    Var::Node *an = a.node_, *bn = b.node_, *on = &n;
    n.backprop = [an, bn, on]() {
        for (std::size_t i = 0; i < on->grad.size(); ++i) {
            an->grad[i] += on->grad[i];
            bn->grad[i] -= on->grad[i];
        }
    };
    return Var(on);
}

Var Graph::mul(Var a, Var b) {
    require_same_shape(a.node_->value, b.node_->value, "mul");
    Tensor out(a.shape());
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] = a.node_->value[i] * b.node_->value[i];
    Var::Node& n = make_node(std::move(out));
    Var::Node *an = a.node_, *bn = b.node_, *on = &n;
    n.backprop = [an, bn, on]() {
        for (std::size_t i = 0; i < on->grad.size(); ++i) {
            an->grad[i] += on->grad[i] * bn->value[i];
            bn->grad[i] += on->grad[i] * an->value[i];
        }
    };
    return Var(on);
}

Var Graph::scale(Var a, double c) {
    return unary(a, "scale",
                 [c](double x) { return c * x; },
                 [c](double, double) { return c; });
}

Var Graph::add_scalar(Var a, double c) {
    return unary(a, "add_scalar",
                 [c](double x) { return x + c; },
                 [](double, double) { return 1.0; });
}

Var Graph::sum(Var a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.numel(); ++i) acc += a.node_->value[i];
    Var::Node& n = make_node(Tensor(Shape{1}, {acc}));
    Var::Node *an = a.node_, *on = &n;
    n.backprop = [an, on]() {
        const double g = on->grad[0];
        for (double& d : an->grad) d += g;
    };
    return Var(on);
}

Var Graph::mean(Var a) {
    return scale(sum(a), 1.0 / static_cast<double>(a.numel()));
}

Var Graph::sum_axis(Var a, std::size_t axis) {
    const Tensor& av = a.node_->value;
    if (axis >= av.rank())
        throw DimensionError("reduce: axis " + std::to_string(axis) + " out of range for rank-" +
                             std::to_string(av.rank()) + " tensor");
    if (av.rank() == 1) return sum(a);

    const std::size_t rows = av.rows(), cols = av.cols();
    if (axis == 0) {
        Tensor out(Shape{cols});
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) out[c] += av.at(r, c);
        Var::Node& n = make_node(std::move(out));
        Var::Node *an = a.node_, *on = &n;
        n.backprop = [an, on, rows, cols]() {
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t c = 0; c < cols; ++c) an->grad[r * cols + c] += on->grad[c];
        };
        return Var(on);
    }
    Tensor out(Shape{rows});
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) out[r] += av.at(r, c);
    Var::Node& n = make_node(std::move(out));
    Var::Node *an = a.node_, *on = &n;
    n.backprop = [an, on, rows, cols]() {
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) an->grad[r * cols + c] += on->grad[r];
    };
    return Var(on);
}

Var Graph::mean_axis(Var a, std::size_t axis) {
    const Tensor& av = a.node_->value;
    if (axis >= av.rank())
        throw DimensionError("reduce: axis " + std::to_string(axis) + " out of range for rank-" +
                             std::to_string(av.rank()) + " tensor");
    const std::size_t extent = av.shape()[axis];
    return scale(sum_axis(a, axis), 1.0 / static_cast<double>(extent));
}

Var Graph::reduce(Var a, ReduceKind kind, std::optional<std::size_t> axis) {
    if (!axis) return kind == ReduceKind::Sum ? sum(a) : mean(a);
    return kind == ReduceKind::Sum ? sum_axis(a, *axis) : mean_axis(a, *axis);
}

Var Graph::concat(Var a, Var b) {
    const Tensor& av = a.node_->value;
    const Tensor& bv = b.node_->value;
    if (av.rank() != 1 || bv.rank() != 1)
        throw DimensionError("concat: expects rank-1 operands, got " + shape_str(av.shape()) +
                             " and " + shape_str(bv.shape()));
    Tensor out(Shape{av.numel() + bv.numel()});
    for (std::size_t i = 0; i < av.numel(); ++i) out[i] = av[i];
    for (std::size_t i = 0; i < bv.numel(); ++i) out[av.numel() + i] = bv[i];
    Var::Node& n = make_node(std::move(out));
    Var::Node *an = a.node_, *bn = b.node_, *on = &n;
    const std::size_t na = av.numel();
    n.backprop = [an, bn, on, na]() {
        for (std::size_t i = 0; i < an->grad.size(); ++i) an->grad[i] += on->grad[i];
        for (std::size_t i = 0; i < bn->grad.size(); ++i) bn->grad[i] += on->grad[na + i];
    };
    return Var(on);
}

Var Graph::concat_cols(Var a, Var b) {
    const Tensor& av = a.node_->value;
    const Tensor& bv = b.node_->value;
    if (av.rank() != 2 || bv.rank() != 2)
        throw DimensionError("concat_cols: expects rank-2 operands");
    if (av.rows() != bv.rows())
        throw DimensionError("concat_cols: row counts " + std::to_string(av.rows()) + " and " +
                             std::to_string(bv.rows()) + " differ");
    const std::size_t rows = av.rows(), ca = av.cols(), cb = bv.cols();
    Tensor out(Shape{rows, ca + cb});
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < ca; ++c) out.at(r, c) = av.at(r, c);
        for (std::size_t c = 0; c < cb; ++c) out.at(r, ca + c) = bv.at(r, c);
    }
    Var::Node& n = make_node(std::move(out));
    Var::Node *an = a.node_, *bn = b.node_, *on = &n;
    n.backprop = [an, bn, on, rows, ca, cb]() {
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < ca; ++c) an->grad[r * ca + c] += on->grad[r * (ca + cb) + c];
            for (std::size_t c = 0; c < cb; ++c)
                bn->grad[r * cb + c] += on->grad[r * (ca + cb) + ca + c];
        }
    };
    return Var(on);
}

Var Graph::repeat_rows(Var v, std::size_t copies) {
    const Tensor& vv = v.node_->value;
    if (vv.rank() != 1)
        throw DimensionError("repeat_rows: expects a rank-1 operand, got " + shape_str(vv.shape()));
    const std::size_t n_cols = vv.numel();
    Tensor out(Shape{copies, n_cols});
    for (std::size_t r = 0; r < copies; ++r)
        for (std::size_t c = 0; c < n_cols; ++c) out.at(r, c) = vv[c];
    Var::Node& n = make_node(std::move(out));
    Var::Node *vn = v.node_, *on = &n;
    n.backprop = [vn, on, copies, n_cols]() {
        for (std::size_t r = 0; r < copies; ++r)
            for (std::size_t c = 0; c < n_cols; ++c) vn->grad[c] += on->grad[r * n_cols + c];
    };
    return Var(on);
}

void Graph::backward(Var root) {
    if (root.node_ == nullptr) throw ContractError("backward: empty root");
    if (root.node_->value.numel() != 1)
        throw ContractError("backward: root must be scalar, got shape " +
                            shape_str(root.node_->value.shape()));
    for (Var::Node& n : nodes_) {
        std::fill(n.grad.begin(), n.grad.end(), 0.0);
        if (n.bound) n.bound->zero_grad();
    }
    root.node_->grad[0] = 1.0;
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
        if (it->backprop) it->backprop();
        if (it->bound) {
            std::vector<double>& g = it->bound->grad();
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += it->grad[i];
        }
    }
}

}  // namespace gvae
