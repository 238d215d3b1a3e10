// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#include "ulrn/csv.hpp"

#include <cstdio>
#include <fstream>

#include "ulrn/error.hpp"

namespace ulrn {

std::string csv_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

void write_steps_csv(const std::filesystem::path& path, const std::vector<StepLog>& steps) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("cannot write " + path.string());
    f << "step,epoch,loop,loss_g,loss_s,n_forget_synth,n_filtered,kept,H_B,wall_ms\n";
    for (const auto& s : steps) {
        f << s.step << ',' << s.epoch << ',' << s.loop << ',' << csv_num(s.loss_g) << ','
          << csv_num(s.loss_s) << ',' << s.n_forget_synth << ',' << s.n_filtered << ',' << s.kept
          << ',' << csv_num(s.h_b) << ',' << csv_num(s.wall_ms) << '\n';
    }
    if (!f) throw IoError("short write to " + path.string());
}

std::string report_header() {
    return "method,seed_count,A_f_mean,A_f_std,A_r_mean,A_r_std,MIA_I,MIA_II,AIN";
}

std::string report_row_line(const ReportRow& r) {
    std::string line = r.method;
    line += ',' + std::to_string(r.seed_count);
    line += ',' + csv_num(r.a_f_mean) + ',' + csv_num(r.a_f_std);
    line += ',' + csv_num(r.a_r_mean) + ',' + csv_num(r.a_r_std);
    line += ',' + csv_num(r.mia_i) + ',' + csv_num(r.mia_ii) + ',' + csv_num(r.ain);
    return line;
}

void write_report_csv(const std::filesystem::path& path, const std::vector<ReportRow>& rows) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("cannot write " + path.string());
    f << report_header() << '\n';
    for (const auto& r : rows) f << report_row_line(r) << '\n';
    if (!f) throw IoError("short write to " + path.string());
}

void append_runs_csv(const std::filesystem::path& path, const RunSummary& s) {
    const bool fresh = !std::filesystem::exists(path);
    std::ofstream f(path, std::ios::app);
    if (!f) throw IoError("cannot write " + path.string());
    if (fresh) f << "command,seed,train_acc,test_acc,file\n";
    f << s.command << ',' << s.seed << ',' << csv_num(s.train_acc) << ',' << csv_num(s.test_acc)
      << ',' << s.file << '\n';
    if (!f) throw IoError("short write to " + path.string());
}

} // namespace ulrn
