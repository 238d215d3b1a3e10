// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ulrn/engine.hpp"
#include "ulrn/eval.hpp"

namespace ulrn {

/// step,epoch,loop,loss_g,loss_s,n_forget_synth,n_filtered,kept,H_B,wall_ms
void write_steps_csv(const std::filesystem::path& path, const std::vector<StepLog>& steps);

/// method,seed_count,A_f_mean,A_f_std,A_r_mean,A_r_std,MIA_I,MIA_II,AIN
void write_report_csv(const std::filesystem::path& path, const std::vector<ReportRow>& rows);
std::string report_header();
std::string report_row_line(const ReportRow& row);

/// Appends one run summary line to runs.csv, creating the header on first use.
struct RunSummary {
    std::string command;
    std::uint64_t seed = 0;
    double train_acc = 0.0;
    double test_acc = 0.0;
    std::string file;
};
void append_runs_csv(const std::filesystem::path& path, const RunSummary& summary);

/// Fixed-precision float formatting shared by all CSV output so repeated
/// runs are byte-identical.
std::string csv_num(double v);

} // namespace ulrn
