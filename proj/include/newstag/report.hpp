#ifndef NEWSTAG_REPORT_HPP
#define NEWSTAG_REPORT_HPP

#include "newstag/analysis.hpp"
#include "newstag/harness.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace newstag {

/// Shortest representation that reads back to the same double.
std::string format_double(double value);

/// Metrics JSON with the config echo plus per-repetition and aggregate F1s.
void write_metrics_json(std::ostream& out, const MetricsReport& report);

/// `news_id,predicted_label,score`.
void write_predictions_csv(std::ostream& out, const std::vector<Prediction>& predictions);

/// `x,macro_f1_mean,macro_f1_std,micro_f1_mean,micro_f1_std`.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Same columns as the sweep CSV with x = mu.
void write_grid_csv(std::ostream& out, const GridReport& report);

void write_purity_csv(std::ostream& out, const PurityReport& report);
void write_popularity_csv(std::ostream& out, const PopularityReport& report);
void write_case_study_tsv(std::ostream& out, const CaseStudyReport& report);
/// `loop,iteration,residual` with loop in {k1, k2}.
void write_convergence_csv(std::ostream& out, const ConvergenceTrace& trace);

}  // namespace newstag

#endif  // NEWSTAG_REPORT_HPP
