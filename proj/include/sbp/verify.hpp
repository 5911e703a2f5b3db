#pragma once

#include "sbp/operator.hpp"

#include <map>
#include <string>
#include <vector>

namespace sbp {

struct VerifyTolerances {
    double skew = 1e-13;        // Eq. 3 identities, relative to max|D|
    double psd_relative = 1e-10; // lambda_max(S) <= psd_relative * max|S|
    double accuracy = 1e-10;    // scaled polynomial residual
    double reflection = 1e-13;  // J D+ J = -D-
};

struct AccuracyResidual {
    double interior = 0.0;
    double boundary = 0.0;
};

struct SizeCheck {
    int m = 0;
    bool h_positive = false;
    double skew_identity_residual = 0.0;
    double reflection_residual = 0.0;
    double psd_max_eigenvalue = 0.0;
    double psd_threshold = 0.0;
    double max_abs_s = 0.0;
    std::map<int, AccuracyResidual> accuracy;   // q -> scaled residuals
    bool pass = false;
    std::vector<std::string> failures;
};

struct SbpReport {
    bool h_positive = false;
    double skew_identity_residual = 0.0;
    double psd_max_eigenvalue = 0.0;   // worst lambda_max(S)/max|S| over sizes
    std::map<int, AccuracyResidual> accuracy_table;   // worst over sizes
    std::vector<SizeCheck> sizes;
    bool pass = false;

    std::string summary() const;
};

// Rows whose D+ and D- rows are the plain interior stencil on equispaced nodes.
std::vector<bool> interior_rows(const OperatorPair& pair, const AssembledOperators& ops);

SbpReport verify_sbp(const OperatorPair& pair, const std::vector<int>& sizes,
                     const VerifyTolerances& tol = {});

// The default size set {m_min, m_min + 7, 101}.
std::vector<int> default_verify_sizes(const OperatorPair& pair);

} // namespace sbp
