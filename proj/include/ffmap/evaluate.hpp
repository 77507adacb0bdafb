#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "ffmap/geometry.hpp"
#include "ffmap/labeling.hpp"

namespace ffmap {

/// Detected area of a point set: number of distinct `cell`-sized voxels
/// touched, times cell^2. Exact for thin axis-aligned patches, idempotent
/// under duplication and monotone under insertion. Empty input gives 0.
double surface_area(std::span<const Point3> points, double cell = 0.05);

struct LabelMetrics {
    Label label = Label::Wall;
    double tp_area = 0.0;
    double fp_area = 0.0;
    double fn_area = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool precision_defined = false;  // false when tp + fp areas are both 0
    bool recall_defined = false;     // false when tp + fn areas are both 0
};

/// precision = tp/(tp+fp), recall = tp/(tp+fn), f1 = 2pr/(p+r); undefined
/// ratios are flagged instead of silently zeroed.
LabelMetrics metrics_from_areas(Label label, double tp_area, double fp_area, double fn_area);

/// Area-based confusion per label between an index-matched prediction and
/// ground truth covering the same points. Positions must agree within
/// match_tol. Returns one entry per label value.
std::vector<LabelMetrics> metrics(const LabeledCloud& pred, const LabeledCloud& truth,
                                  double match_tol = 1e-6, double cell = 0.05);

/// Tab-separated table: Label FP TP FN Precision Recall F1, areas in m^2,
/// ratios as percentages; undefined ratios print as "undef".
void write_metrics_tsv(std::ostream& out, std::span<const LabelMetrics> rows);

}  // namespace ffmap
