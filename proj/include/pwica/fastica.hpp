/******************************************************************************
 * Copyright 2026 The pwica Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * 	http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 * @file fastica.hpp One-unit FastICA with a negentropy contrast, and the
 * centering / whitening that precede it. The separating vector found in the
 * whitened space is mapped back through the whitener to give a weight per
 * observation row, which is used as an apodization window.
 *
 *****************************************************************************/
#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pwica/model.hpp"

namespace pwica {

/// Rows are observations (one per receive element), columns are samples.
struct ObservationMatrix {
	Eigen::MatrixXd X;
	std::vector<std::size_t> row_element_map;   // element index of each row, increasing

	std::size_t rows() const noexcept { return static_cast<std::size_t>(X.rows()); }
	std::size_t cols() const noexcept { return static_cast<std::size_t>(X.cols()); }
};

/// Checks n >= 2, m >= n, no all-zero row and a consistent row map.
void validate(const ObservationMatrix& obs);

struct WhiteningModel {
	Eigen::VectorXd mean;
	Eigen::MatrixXd whitener;     // Z = whitener * (X - mean)
	Eigen::MatrixXd dewhitener;   // whitener^-1
	Eigen::VectorXd eigenvalues;  // of the sample covariance, ascending
};

enum class Contrast { logcosh, gauss };

struct IcaConfig {
	int max_iterations = 100;
	double epsilon = 1e-6;
	Contrast contrast = Contrast::logcosh;
	double a1 = 1.0;
	std::uint64_t seed = 0;
	/// Optional observer called with (iteration, w) after each normalization.
	std::function<void(int, const Eigen::VectorXd&)> on_iteration;
};

void validate(const IcaConfig& config);

struct IcaResult {
	Eigen::VectorXd w_whitened;          // unit separating vector in the whitened space
	ApodizationProfile w_aperture;       // canonical separating row, one weight per element
	ApodizationProfile mixing_column;    // canonical dewhitener * w, for inspection
	int iterations_used = 0;
	bool converged = false;
	std::vector<double> convergence_trace;   // |<w_new, w>| per iteration
	std::uint64_t seed = 0;
};

/// Subtracts the row means. Returns the centered matrix and the means.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> center(const Eigen::MatrixXd& X);

/// Symmetric (ZCA) whitening of centered data. All eigen-directions are
/// kept. Throws Error(rank_deficient) when the covariance condition number
/// exceeds 1e12.
std::pair<Eigen::MatrixXd, WhiteningModel> whiten(const Eigen::MatrixXd& Xc);

/// Sample covariance (1/m normalization) of row-observation data.
Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& X);

struct ContrastValue {
	double g = 0.0;
	double dg = 0.0;
};

/// First and second derivatives of the negentropy contrast:
/// logcosh: f = log cosh(a1 u) / a1, gauss: f = -exp(-u^2 / 2).
ContrastValue contrast_g(double u, const IcaConfig& config) noexcept;

/// Fixed-point iteration w <- E{z g(w'z)} - E{g'(w'z)} w, w <- w / |w| on
/// whitened data Z. Converged when 1 - |<w_new, w>| < epsilon. A run that
/// exhausts max_iterations is returned with converged = false.
/// w_aperture is left empty; see estimate_apodization.
IcaResult fastica_one_unit(const Eigen::MatrixXd& Z, const IcaConfig& config);

/// center -> whiten -> fastica_one_unit, then maps the separating vector to
/// element order (elements absent from the row map get weight 0) and
/// canonicalizes it. n_elements = 0 means "number of rows".
IcaResult estimate_apodization(const ObservationMatrix& obs, const IcaConfig& config,
		std::size_t n_elements = 0);

} // namespace pwica
