#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scaforge/rng.hpp"
#include "scaforge/sensor.hpp"

namespace scaforge::detect {

struct MlpLayer {
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<double> w; // row-major out x in
    std::vector<double> b; // out
};

/// Fully connected classifier: rectifier hidden layers, softmax output.
/// Inputs are normalized with per-feature statistics captured at training
/// time (identity for a freshly constructed model).
struct DetectorModel {
    std::vector<MlpLayer> layers;
    std::vector<double> feat_mean;  // empty = identity normalization
    std::vector<double> feat_scale;
    double final_train_loss = 0.0;
    bool degenerate_single_class = false;

    std::size_t input_size() const { return layers.empty() ? 0 : layers.front().in; }
    std::size_t output_size() const { return layers.empty() ? 0 : layers.back().out; }

    /// Softmax probabilities for one input trace.
    std::vector<double> forward(std::span<const float> x) const;
};

/// Layer-dimension spec: input -> hidden... -> kNumClasses.
DetectorModel make_detector(std::size_t input, const std::vector<std::size_t>& hidden,
                            const RngStream& rng);

struct TrainHyper {
    std::vector<std::size_t> hidden = {64, 32};
    double learning_rate = 0.05;
    std::size_t epochs = 30;
    std::size_t batch_size = 32;
};

struct EpochStat {
    std::size_t epoch = 0;
    double loss = 0.0;     // mean cross-entropy over the epoch
    double accuracy = 0.0; // training accuracy over the epoch
};

struct TrainOutcome {
    DetectorModel model;
    std::vector<EpochStat> curve;
};

/// Mini-batch gradient descent on cross-entropy; deterministic per rng.
/// Throws Error on divergence (non-finite loss). A single-class dataset
/// trains normally but is flagged degenerate on the model.
TrainOutcome train_detector(const SensorDataset& dataset, const TrainHyper& hyper,
                            const RngStream& rng);

struct Classification {
    Scenario label = Scenario::Benign;
    double confidence = 0.0;
};

/// Argmax of the softmax output; ties break towards the lowest class index.
Classification classify(const DetectorModel& model, const SensorTrace& trace);

/// Confusion matrix [true][predicted] plus accuracy.
struct EvalReport {
    std::array<std::array<std::size_t, kNumClasses>, kNumClasses> confusion{};
    double accuracy = 0.0;
};
EvalReport evaluate(const DetectorModel& model, const SensorDataset& dataset);

/// Mean cross-entropy gradient over a batch, flattened layer by layer
/// (w then b). Exposed so the finite-difference oracle can see it.
std::vector<double> batch_gradient(const DetectorModel& model,
                                   const std::vector<const SensorTrace*>& batch);

/// Compares analytic gradients with central finite differences (step 1e-4)
/// on one example; returns the max relative error with denominator
/// max(|a|+|n|, 1e-3).
double gradient_check(const DetectorModel& model, const SensorTrace& example);

} // namespace scaforge::detect
