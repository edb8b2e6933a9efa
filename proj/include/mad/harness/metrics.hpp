#pragma once

#include <span>
#include <string>
#include <vector>

#include "mad/dataset.hpp"
#include "mad/neural/deeponet.hpp"

namespace mad {

/// ||pred - truth||_2 / ||truth||_2. Throws on length mismatch or zero truth.
double relative_l2(std::span<const double> pred, std::span<const double> truth);

struct EvalReport {
    std::vector<double> per_sample;
    double mean = 0.0;
    Generator generator = Generator::Mad1;
    Provenance provenance = Provenance::TestSet1;
    double train_seconds = 0.0;
    double final_train_loss = 0.0;
};

/// Per-sample relative L2 of the model against the stored u. Samples are
/// split over threads; the aggregate is summed in sample order.
EvalReport evaluate(const nn::FieldOperator& model, const Dataset& test, unsigned threads = 1);

}  // namespace mad
