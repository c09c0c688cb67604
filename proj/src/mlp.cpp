#include "scaforge/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "scaforge/error.hpp"

namespace scaforge::detect {

namespace {

struct ForwardCache {
    std::vector<std::vector<double>> act; // act[0] = normalized input, act[i] = layer i output
    std::vector<std::vector<double>> pre; // pre-activation per layer
};

std::vector<double> normalized_input(const DetectorModel& m, std::span<const float> x) {
    std::vector<double> v(x.size());
    if (m.feat_mean.empty()) {
        for (std::size_t i = 0; i < x.size(); ++i)
            v[i] = x[i];
    } else {
        for (std::size_t i = 0; i < x.size(); ++i)
            v[i] = (x[i] - m.feat_mean[i]) / m.feat_scale[i];
    }
    return v;
}

void softmax_inplace(std::vector<double>& z) {
    const double zmax = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double& v : z) {
        v = std::exp(v - zmax);
        sum += v;
    }
    for (double& v : z)
        v /= sum;
}

ForwardCache forward_cached(const DetectorModel& m, std::span<const float> x) {
    ForwardCache fc;
    fc.act.push_back(normalized_input(m, x));
    for (std::size_t li = 0; li < m.layers.size(); ++li) {
        const MlpLayer& layer = m.layers[li];
        const std::vector<double>& in = fc.act.back();
        std::vector<double> z(layer.out);
        for (std::size_t o = 0; o < layer.out; ++o) {
            double acc = layer.b[o];
            const double* wrow = layer.w.data() + o * layer.in;
            for (std::size_t i = 0; i < layer.in; ++i)
                acc += wrow[i] * in[i];
            z[o] = acc;
        }
        fc.pre.push_back(z);
        if (li + 1 < m.layers.size()) {
            for (double& v : z)
                v = std::max(v, 0.0);
        } else {
            softmax_inplace(z);
        }
        fc.act.push_back(std::move(z));
    }
    return fc;
}

std::size_t param_count(const DetectorModel& m) {
    std::size_t n = 0;
    for (const auto& l : m.layers)
        n += l.w.size() + l.b.size();
    return n;
}

// Gradient of mean cross-entropy for one example, accumulated into flat.
void accumulate_gradient(const DetectorModel& m, const SensorTrace& ex, double weight,
                         std::vector<double>& flat) {
    const ForwardCache fc = forward_cached(m, ex.samples);
    const std::size_t n_layers = m.layers.size();

    // d loss / d pre-activation of the output layer.
    std::vector<double> dz = fc.act.back();
    dz[static_cast<std::size_t>(ex.label)] -= 1.0;

    std::size_t offset = param_count(m);
    for (std::size_t li = n_layers; li-- > 0;) {
        const MlpLayer& layer = m.layers[li];
        offset -= layer.w.size() + layer.b.size();
        double* gw = flat.data() + offset;
        double* gb = gw + layer.w.size();
        const std::vector<double>& in = fc.act[li];
        for (std::size_t o = 0; o < layer.out; ++o) {
            const double d = dz[o] * weight;
            gb[o] += d;
            double* grow = gw + o * layer.in;
            for (std::size_t i = 0; i < layer.in; ++i)
                grow[i] += d * in[i];
        }
        if (li == 0)
            break;
        std::vector<double> dprev(layer.in, 0.0);
        for (std::size_t o = 0; o < layer.out; ++o) {
            const double d = dz[o];
            const double* wrow = layer.w.data() + o * layer.in;
            for (std::size_t i = 0; i < layer.in; ++i)
                dprev[i] += wrow[i] * d;
        }
        for (std::size_t i = 0; i < layer.in; ++i)
            dprev[i] = fc.pre[li - 1][i] > 0.0 ? dprev[i] : 0.0;
        dz = std::move(dprev);
    }
}

void apply_flat_delta(DetectorModel& m, const std::vector<double>& flat, double scale) {
    std::size_t offset = 0;
    for (auto& layer : m.layers) {
        for (auto& v : layer.w)
            v += scale * flat[offset++];
        for (auto& v : layer.b)
            v += scale * flat[offset++];
    }
}

double* param_at(DetectorModel& m, std::size_t idx) {
    for (auto& layer : m.layers) {
        if (idx < layer.w.size())
            return &layer.w[idx];
        idx -= layer.w.size();
        if (idx < layer.b.size())
            return &layer.b[idx];
        idx -= layer.b.size();
    }
    return nullptr;
}

double example_loss(const DetectorModel& m, const SensorTrace& ex) {
    const auto p = m.forward(ex.samples);
    return -std::log(std::max(p[static_cast<std::size_t>(ex.label)], 1e-300));
}

} // namespace

std::vector<double> DetectorModel::forward(std::span<const float> x) const {
    if (layers.empty())
        throw DimensionError("DetectorModel::forward: empty model");
    if (x.size() != input_size())
        throw DimensionError("DetectorModel::forward: input length mismatch");
    return forward_cached(*this, x).act.back();
}

DetectorModel make_detector(std::size_t input, const std::vector<std::size_t>& hidden,
                            const RngStream& rng) {
    DetectorModel m;
    RngStream r = rng;
    std::vector<std::size_t> dims;
    dims.push_back(input);
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(kNumClasses);
    for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
        MlpLayer layer;
        layer.in = dims[i];
        layer.out = dims[i + 1];
        layer.w.resize(layer.in * layer.out);
        layer.b.assign(layer.out, 0.0);
        const double bound = std::sqrt(6.0 / static_cast<double>(layer.in + layer.out));
        for (auto& v : layer.w)
            v = bound * (2.0 * r.next_unit() - 1.0);
        m.layers.push_back(std::move(layer));
    }
    return m;
}

std::vector<double> batch_gradient(const DetectorModel& model,
                                   const std::vector<const SensorTrace*>& batch) {
    std::vector<double> flat(param_count(model), 0.0);
    const double w = 1.0 / static_cast<double>(batch.size());
    for (const SensorTrace* ex : batch)
        accumulate_gradient(model, *ex, w, flat);
    return flat;
}

TrainOutcome train_detector(const SensorDataset& dataset, const TrainHyper& hyper,
                            const RngStream& rng) {
    if (dataset.traces.empty())
        throw DimensionError("train_detector: empty dataset");
    const std::size_t input = dataset.traces.front().samples.size();
    for (const auto& t : dataset.traces)
        if (t.samples.size() != input)
            throw DimensionError("train_detector: ragged trace lengths");

    TrainOutcome out;
    out.model = make_detector(input, hyper.hidden, rng.substream(0x696e6974)); // "init"

    // Per-feature standardization from the training set.
    out.model.feat_mean.assign(input, 0.0);
    out.model.feat_scale.assign(input, 1.0);
    for (const auto& t : dataset.traces)
        for (std::size_t i = 0; i < input; ++i)
            out.model.feat_mean[i] += t.samples[i];
    for (auto& v : out.model.feat_mean)
        v /= static_cast<double>(dataset.traces.size());
    std::vector<double> var(input, 0.0);
    for (const auto& t : dataset.traces)
        for (std::size_t i = 0; i < input; ++i) {
            const double d = t.samples[i] - out.model.feat_mean[i];
            var[i] += d * d;
        }
    for (std::size_t i = 0; i < input; ++i)
        out.model.feat_scale[i] =
            std::max(std::sqrt(var[i] / static_cast<double>(dataset.traces.size())), 1e-9);

    std::array<bool, kNumClasses> seen{};
    for (const auto& t : dataset.traces)
        seen[static_cast<std::size_t>(t.label)] = true;
    out.model.degenerate_single_class =
        std::count(seen.begin(), seen.end(), true) < 2;

    RngStream shuffle_rng = rng.substream(0x73687566); // "shuf"
    std::vector<std::size_t> order(dataset.traces.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;

    const std::size_t batch_size = std::max<std::size_t>(1, hyper.batch_size);
    for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
        for (std::size_t i = order.size() - 1; i > 0; --i)
            std::swap(order[i], order[shuffle_rng.next_below(i + 1)]);

        double loss_sum = 0.0;
        std::size_t correct = 0;
        for (std::size_t start = 0; start < order.size(); start += batch_size) {
            const std::size_t end = std::min(order.size(), start + batch_size);
            std::vector<const SensorTrace*> batch;
            batch.reserve(end - start);
            for (std::size_t i = start; i < end; ++i)
                batch.push_back(&dataset.traces[order[i]]);

            for (const SensorTrace* ex : batch) {
                const auto p = out.model.forward(ex->samples);
                loss_sum += -std::log(std::max(p[static_cast<std::size_t>(ex->label)], 1e-300));
                const std::size_t arg =
                    std::max_element(p.begin(), p.end()) - p.begin();
                if (arg == static_cast<std::size_t>(ex->label))
                    ++correct;
            }
            const auto grad = batch_gradient(out.model, batch);
            apply_flat_delta(out.model, grad, -hyper.learning_rate);
        }

        EpochStat stat;
        stat.epoch = epoch;
        stat.loss = loss_sum / static_cast<double>(order.size());
        stat.accuracy = static_cast<double>(correct) / static_cast<double>(order.size());
        if (!std::isfinite(stat.loss))
            throw Error("train_detector: training diverged (non-finite loss)");
        out.curve.push_back(stat);
        out.model.final_train_loss = stat.loss;
    }
    return out;
}

Classification classify(const DetectorModel& model, const SensorTrace& trace) {
    const auto p = model.forward(trace.samples);
    std::size_t best = 0;
    for (std::size_t i = 1; i < p.size(); ++i)
        if (p[i] > p[best])
            best = i; // strict >: ties keep the lowest class index
    return {static_cast<Scenario>(best), p[best]};
}

EvalReport evaluate(const DetectorModel& model, const SensorDataset& dataset) {
    EvalReport rep;
    std::size_t correct = 0;
    for (const auto& t : dataset.traces) {
        const auto c = classify(model, t);
        rep.confusion[static_cast<std::size_t>(t.label)][static_cast<std::size_t>(c.label)]++;
        if (c.label == t.label)
            ++correct;
    }
    rep.accuracy = dataset.traces.empty()
                       ? 0.0
                       : static_cast<double>(correct) / static_cast<double>(dataset.traces.size());
    return rep;
}

double gradient_check(const DetectorModel& model, const SensorTrace& example) {
    const std::vector<const SensorTrace*> batch{&example};
    const auto analytic = batch_gradient(model, batch);

    DetectorModel probe = model;
    const double h = 1e-4;
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        double* p = param_at(probe, i);
        const double saved = *p;
        *p = saved + h;
        const double lp = example_loss(probe, example);
        *p = saved - h;
        const double lm = example_loss(probe, example);
        *p = saved;
        const double numeric = (lp - lm) / (2.0 * h);
        const double denom = std::max(std::fabs(analytic[i]) + std::fabs(numeric), 1e-3);
        worst = std::max(worst, std::fabs(analytic[i] - numeric) / denom);
    }
    return worst;
}

} // namespace scaforge::detect
