#include "mad/harness/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "mad/neural/loss.hpp"
#include "mad/parallel.hpp"

namespace mad {

double relative_l2(std::span<const double> pred, std::span<const double> truth) {
    if (pred.size() != truth.size()) throw std::invalid_argument("relative_l2: length mismatch");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double e = pred[i] - truth[i];
        num += e * e;
        den += truth[i] * truth[i];
    }
    if (den == 0.0) throw std::invalid_argument("relative_l2: truth has zero norm");
    return std::sqrt(num / den);
}

EvalReport evaluate(const nn::FieldOperator& model, const Dataset& test, unsigned threads) {
    if (!test.has_u) throw std::invalid_argument("evaluate: test set has no solution values");
    if (test.n == 0) throw std::invalid_argument("evaluate: empty test set");
    const nn::OperatorBatch batch = nn::make_batch(test);
    if (batch.dim != model.spatial_dim() || batch.boundary_size() != model.boundary_inputs()) {
        throw std::invalid_argument("evaluate: model input dimensions do not match the test set");
    }
    const bool use_f = test.has_f && model.source_inputs() > 0;
    if (test.has_f && !use_f) throw std::invalid_argument("evaluate: test set has a source the model cannot take");
    if (use_f && model.source_inputs() != test.grid_size) {
        throw std::invalid_argument("evaluate: model source input size does not match the test set");
    }

    EvalReport rep;
    rep.generator = test.meta.generator;
    rep.provenance = test.meta.provenance;
    rep.per_sample.assign(test.n, 0.0);
    const std::size_t m = test.grid_size;
    const std::size_t mb = test.boundary_size;
    constexpr std::size_t kChunk = 16;
    const std::size_t chunks = (test.n + kChunk - 1) / kChunk;
    parallel_for(chunks, threads, [&](std::size_t c) {
        const std::size_t lo = c * kChunk;
        const std::size_t hi = std::min(test.n, lo + kChunk);
        const std::span<const double> g(test.g.data() + lo * mb, (hi - lo) * mb);
        const std::span<const double> f =
            use_f ? std::span<const double>(test.f.data() + lo * m, (hi - lo) * m) : std::span<const double>{};
        const auto pred = model.predict(g, f, hi - lo, batch.x, m);
        for (std::size_t i = lo; i < hi; ++i) {
            rep.per_sample[i] = relative_l2(std::span<const double>(pred.data() + (i - lo) * m, m), test.u_row(i));
        }
    });
    double s = 0.0;
    for (double e : rep.per_sample) s += e;
    rep.mean = s / static_cast<double>(test.n);
    return rep;
}

}  // namespace mad
