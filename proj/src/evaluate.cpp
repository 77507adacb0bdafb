#include "ffmap/evaluate.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <unordered_set>

#include "ffmap/errors.hpp"

namespace ffmap {

namespace {

std::uint64_t voxel_key(const Point3& p, double cell) {
    const auto qx = static_cast<std::int64_t>(std::floor(p.x / cell));
    const auto qy = static_cast<std::int64_t>(std::floor(p.y / cell));
    const auto qz = static_cast<std::int64_t>(std::floor(p.z / cell));
    // 21 bits per axis, offset to keep them non-negative.
    const std::uint64_t bias = 1u << 20;
    return ((static_cast<std::uint64_t>(qx) + bias) & 0x1fffff) |
           (((static_cast<std::uint64_t>(qy) + bias) & 0x1fffff) << 21) |
           (((static_cast<std::uint64_t>(qz) + bias) & 0x1fffff) << 42);
}

}  // namespace

double surface_area(std::span<const Point3> points, double cell) {
    if (points.empty()) return 0.0;
    std::unordered_set<std::uint64_t> voxels;
    voxels.reserve(points.size());
    for (const auto& p : points) voxels.insert(voxel_key(p, cell));
    return static_cast<double>(voxels.size()) * cell * cell;
}

LabelMetrics metrics_from_areas(Label label, double tp_area, double fp_area, double fn_area) {
    LabelMetrics m;
    m.label = label;
    m.tp_area = tp_area;
    m.fp_area = fp_area;
    m.fn_area = fn_area;
    if (tp_area + fp_area > 0.0) {
        m.precision = tp_area / (tp_area + fp_area);
        m.precision_defined = true;
    }
    if (tp_area + fn_area > 0.0) {
        m.recall = tp_area / (tp_area + fn_area);
        m.recall_defined = true;
    }
    if (m.precision_defined && m.recall_defined && m.precision + m.recall > 0.0)
        m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

std::vector<LabelMetrics> metrics(const LabeledCloud& pred, const LabeledCloud& truth,
                                  double match_tol, double cell) {
    if (pred.size() != truth.size())
        throw Error("prediction and ground truth differ in size: " + std::to_string(pred.size()) +
                    " vs " + std::to_string(truth.size()));
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const Vec3 d = pred.points[i] - truth.points[i];
        if (std::abs(d.x) > match_tol || std::abs(d.y) > match_tol || std::abs(d.z) > match_tol)
            throw Error("prediction and ground truth diverge at point " + std::to_string(i));
    }

    std::vector<LabelMetrics> rows;
    rows.reserve(kLabelCount);
    std::vector<Point3> tp, fp, fn;
    for (int l = 0; l < kLabelCount; ++l) {
        const Label label = static_cast<Label>(l);
        tp.clear();
        fp.clear();
        fn.clear();
        for (std::size_t i = 0; i < pred.size(); ++i) {
            const bool in_pred = pred.labels[i] == label;
            const bool in_truth = truth.labels[i] == label;
            if (in_pred && in_truth)
                tp.push_back(pred.points[i]);
            else if (in_pred)
                fp.push_back(pred.points[i]);
            else if (in_truth)
                fn.push_back(pred.points[i]);
        }
        rows.push_back(metrics_from_areas(label, surface_area(tp, cell), surface_area(fp, cell),
                                          surface_area(fn, cell)));
    }
    return rows;
}

void write_metrics_tsv(std::ostream& out, std::span<const LabelMetrics> rows) {
    out << "Label\tFP\tTP\tFN\tPrecision\tRecall\tF1-Measure\n";
    char buf[64];
    auto pct = [&](double v, bool defined) -> std::string {
        if (!defined) return "undef";
        std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v);
        return buf;
    };
    for (const LabelMetrics& m : rows) {
        std::snprintf(buf, sizeof buf, "%.2f\t%.2f\t%.2f", m.fp_area, m.tp_area, m.fn_area);
        out << label_name(m.label) << "\t" << buf << "\t" << pct(m.precision, m.precision_defined)
            << "\t" << pct(m.recall, m.recall_defined) << "\t"
            << pct(m.f1, m.precision_defined && m.recall_defined) << "\n";
    }
}

}  // namespace ffmap
