#include "uwmac/budget.hpp"

#include <cstdio>
#include <sstream>

namespace uwmac {

BudgetReport make_budget_report(double power_w, double range_m, double f_khz,
                                double nl_db, const phy::ModeThresholds& thresholds) {
    acoustics::LinkBudgetParams params;
    params.transmit_power_w = power_w;
    params.center_frequency_khz = f_khz;
    params.noise_level_db = nl_db;
    return make_budget_report(params, range_m, thresholds);
}

BudgetReport make_budget_report(const acoustics::LinkBudgetParams& params,
                                double range_m, const phy::ModeThresholds& thresholds) {
    BudgetReport r;
    r.power_w = params.transmit_power_w;
    r.range_m = range_m;
    r.f_khz = params.center_frequency_khz;
    r.nl_db = params.noise_level_db;
    r.sl_db = acoustics::source_level(r.power_w);
    r.tl1_db = acoustics::spreading_loss(range_m, params.spreading_exponent);
    r.tl2_db = acoustics::thorp_absorption(r.f_khz) * (range_m / 1000.0);
    r.tl_db = r.tl1_db + r.tl2_db;
    r.snr_db = acoustics::received_snr(r.sl_db, r.tl_db, r.nl_db);
    r.selected_mode = phy::select_mode(r.snr_db, thresholds);
    r.fixture_tl_db = r.tl1_db + 8.43;
    r.fixture_snr_db = acoustics::received_snr(r.sl_db, r.fixture_tl_db, r.nl_db);
    return r;
}

std::string format_budget_report(const BudgetReport& r) {
    char buf[256];
    std::ostringstream out;
    std::snprintf(buf, sizeof(buf), "SL   = %.2f dB re 1 uPa  (%.3g W)\n", r.sl_db,
                  r.power_w);
    out << buf;
    std::snprintf(buf, sizeof(buf), "TL1  = %.2f dB  (spreading over %.6g m)\n", r.tl1_db,
                  r.range_m);
    out << buf;
    std::snprintf(buf, sizeof(buf), "TL2  = %.2f dB  (%.4f dB/km at %.6g kHz)\n", r.tl2_db,
                  r.tl2_db / (r.range_m / 1000.0), r.f_khz);
    out << buf;
    std::snprintf(buf, sizeof(buf), "TL   = %.2f dB\n", r.tl_db);
    out << buf;
    std::snprintf(buf, sizeof(buf), "NL   = %.2f dB\n", r.nl_db);
    out << buf;
    std::snprintf(buf, sizeof(buf), "SNR  = %.2f dB\n", r.snr_db);
    out << buf;
    std::snprintf(buf, sizeof(buf), "mode = %d (ESNR-threshold selection)\n",
                  r.selected_mode);
    out << buf;
    std::snprintf(buf, sizeof(buf),
                  "note: with the absorption figure fixed at 8.43 dB, TL = %.2f dB and "
                  "SNR = %.2f dB\n",
                  r.fixture_tl_db, r.fixture_snr_db);
    out << buf;
    out << "      (reference band under that fixture: 5.34 to 25.34 dB SNR at SL "
           "173.77, NL 100 to 80 dB)\n";
    return out.str();
}

}  // namespace uwmac
