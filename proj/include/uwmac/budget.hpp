#pragma once

#include <string>

#include "uwmac/acoustics.hpp"
#include "uwmac/phy_model.hpp"

namespace uwmac {

// Chained link-budget report: SL, spreading and absorption losses, passive
// sonar SNR and the transmission mode that SNR would select.
struct BudgetReport {
    double power_w = 0.0;
    double range_m = 0.0;
    double f_khz = 0.0;
    double nl_db = 0.0;
    double sl_db = 0.0;
    double tl1_db = 0.0;
    double tl2_db = 0.0;  // absorption over the path, formula value
    double tl_db = 0.0;
    double snr_db = 0.0;
    int selected_mode = 0;
    // The same chain with the absorption figure fixed at 8.43 dB, kept as a
    // reference fixture alongside the formula value.
    double fixture_tl_db = 0.0;
    double fixture_snr_db = 0.0;
};

BudgetReport make_budget_report(double power_w, double range_m, double f_khz,
                                double nl_db,
                                const phy::ModeThresholds& thresholds = {});

BudgetReport make_budget_report(const acoustics::LinkBudgetParams& params,
                                double range_m,
                                const phy::ModeThresholds& thresholds = {});

std::string format_budget_report(const BudgetReport& r);

}  // namespace uwmac
