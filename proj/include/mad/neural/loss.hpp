#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mad/dataset.hpp"
#include "mad/neural/deeponet.hpp"

namespace mad::nn {

/// Training or evaluation batch in model layout. Interior points carry u and
/// f; boundary points carry g.
struct OperatorBatch {
    std::size_t n = 0;
    std::size_t dim = 2;
    double k = 0.0;
    std::vector<double> g;   // n x Mb
    std::vector<double> f;   // n x M, empty for a zero source
    std::vector<double> u;   // n x M, empty when absent
    std::vector<double> x;   // M x dim interior (grid) coordinates
    std::vector<double> xb;  // Mb x dim boundary coordinates

    std::size_t grid_size() const { return x.size() / dim; }
    std::size_t boundary_size() const { return xb.size() / dim; }

    /// Rows `idx` of this batch, same coordinates.
    OperatorBatch subset(std::span<const std::size_t> idx) const;
};

/// Batch for all records of a dataset on its domain's grid and boundary points.
OperatorBatch make_batch(const Dataset& ds);

struct PinnWeights {
    double residual = 0.9;
    double boundary = 0.1;
};

/// (1 / NM) sum (u_NN - u*)^2 over all samples and grid points.
double loss_mad(const FieldOperator& model, const OperatorBatch& batch);

/// w_r * mean((lap u_NN + k u_NN - f)^2) over grid points
/// + w_b * mean((u_NN - g)^2) over boundary points.
double loss_pinn(const FieldOperator& model, const OperatorBatch& batch, const PinnWeights& w = {});

/// Loss value with its gradient in OperatorModel::get_params layout.
/// `grad` is overwritten.
double loss_mad_grad(const OperatorModel& model, const OperatorBatch& batch, std::span<double> grad);
double loss_pinn_grad(const OperatorModel& model, const OperatorBatch& batch, const PinnWeights& w,
                      std::span<double> grad);

}  // namespace mad::nn
