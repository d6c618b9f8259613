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
 *****************************************************************************/
#include "pwica/fastica.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "pwica/error.hpp"

namespace pwica {

void validate(const ObservationMatrix& obs)
{
	const auto n = obs.rows();
	const auto m = obs.cols();
	require(n >= 2, "observation matrix: need at least 2 rows");
	require(m >= n, "observation matrix: need at least as many samples as rows");
	require(obs.row_element_map.size() == n, "observation matrix: row map size mismatch");
	for (std::size_t i = 1; i < n; ++i)
		require(obs.row_element_map[i] > obs.row_element_map[i - 1],
				"observation matrix: row map must be strictly increasing");
	for (Eigen::Index i = 0; i < obs.X.rows(); ++i) {
		if (obs.X.row(i).cwiseAbs().maxCoeff() == 0.0) {
			std::ostringstream os;
			os << "observation matrix: row " << i << " (element " << obs.row_element_map[i]
			   << ") is identically zero";
			fail(ErrorCode::invalid_argument, os.str());
		}
	}
	require(obs.X.allFinite(), "observation matrix: non-finite entries");
}

void validate(const IcaConfig& config)
{
	require(config.max_iterations >= 1, "ica: max_iterations must be at least 1");
	require(config.epsilon > 0.0, "ica: epsilon must be positive");
	require(config.a1 >= 1.0 && config.a1 <= 2.0, "ica: a1 must lie in [1, 2]");
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> center(const Eigen::MatrixXd& X)
{
	Eigen::VectorXd mean = X.rowwise().mean();
	Eigen::MatrixXd Xc = X.colwise() - mean;
	return {std::move(Xc), std::move(mean)};
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& X)
{
	const double m = static_cast<double>(X.cols());
	Eigen::MatrixXd C = Eigen::MatrixXd::Zero(X.rows(), X.rows());
	C.selfadjointView<Eigen::Lower>().rankUpdate(X, 1.0 / m);
	return C.selfadjointView<Eigen::Lower>();
}

std::pair<Eigen::MatrixXd, WhiteningModel> whiten(const Eigen::MatrixXd& Xc)
{
	require(Xc.rows() >= 1 && Xc.cols() >= 1, "whiten: empty input");
	const Eigen::MatrixXd C = sample_covariance(Xc);
	Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
	if (eig.info() != Eigen::Success)
		fail(ErrorCode::internal, "whiten: eigendecomposition failed");

	const Eigen::VectorXd& d = eig.eigenvalues();
	const double d_max = d.maxCoeff();
	const double d_min = d.minCoeff();
	if (!(d_max > 0.0) || !(d_min > 0.0) || d_max / d_min > 1e12) {
		std::ostringstream os;
		os << "whiten: covariance is rank deficient (smallest eigenvalue " << d_min
		   << ", largest " << d_max << ", condition limit 1e12)";
		fail(ErrorCode::rank_deficient, os.str());
	}

	const Eigen::MatrixXd& E = eig.eigenvectors();
	WhiteningModel model;
	model.eigenvalues = d;
	model.whitener = E * d.cwiseSqrt().cwiseInverse().asDiagonal() * E.transpose();
	model.dewhitener = E * d.cwiseSqrt().asDiagonal() * E.transpose();
	model.mean = Eigen::VectorXd::Zero(Xc.rows());
	Eigen::MatrixXd Z = model.whitener * Xc;
	return {std::move(Z), std::move(model)};
}

ContrastValue contrast_g(double u, const IcaConfig& config) noexcept
{
	ContrastValue v;
	switch (config.contrast) {
	case Contrast::logcosh: {
		const double t = std::tanh(config.a1 * u);
		v.g = t;
		v.dg = config.a1 * (1.0 - t * t);
		break;
	}
	case Contrast::gauss: {
		const double e = std::exp(-0.5 * u * u);
		v.g = u * e;
		v.dg = (1.0 - u * u) * e;
		break;
	}
	}
	return v;
}

IcaResult fastica_one_unit(const Eigen::MatrixXd& Z, const IcaConfig& config)
{
	validate(config);
	const Eigen::Index n = Z.rows();
	const Eigen::Index m = Z.cols();
	require(n >= 1 && m >= 1, "fastica: empty input");

	std::mt19937_64 rng(config.seed);
	std::normal_distribution<double> normal(0.0, 1.0);
	Eigen::VectorXd w(n);
	for (Eigen::Index i = 0; i < n; ++i)
		w[i] = normal(rng);
	w.normalize();

	IcaResult result;
	result.seed = config.seed;
	result.convergence_trace.reserve(static_cast<std::size_t>(config.max_iterations));

	Eigen::VectorXd y(m);
	Eigen::VectorXd gy(m);
	const double inv_m = 1.0 / static_cast<double>(m);
	for (int it = 1; it <= config.max_iterations; ++it) {
		y.noalias() = Z.transpose() * w;
		double dg_sum = 0.0;
		for (Eigen::Index j = 0; j < m; ++j) {
			const ContrastValue v = contrast_g(y[j], config);
			gy[j] = v.g;
			dg_sum += v.dg;
		}
		Eigen::VectorXd w_new = (Z * gy) * inv_m - (dg_sum * inv_m) * w;
		const double norm = w_new.norm();
		if (!(norm > 0.0) || !std::isfinite(norm))
			fail(ErrorCode::internal, "fastica: iteration produced a degenerate vector");
		w_new /= norm;

		const double alignment = std::abs(w_new.dot(w));
		result.convergence_trace.push_back(alignment);
		result.iterations_used = it;
		w = std::move(w_new);
		if (config.on_iteration)
			config.on_iteration(it, w);
		if (1.0 - alignment < config.epsilon) {
			result.converged = true;
			break;
		}
	}
	result.w_whitened = std::move(w);
	return result;
}

IcaResult estimate_apodization(const ObservationMatrix& obs, const IcaConfig& config,
		std::size_t n_elements)
{
	validate(obs);
	if (n_elements == 0)
		n_elements = obs.rows();
	require(obs.row_element_map.back() < n_elements,
			"estimate_apodization: row map refers past the element count");

	auto [Xc, mean] = center(obs.X);
	auto [Z, model] = whiten(Xc);
	model.mean = std::move(mean);
	IcaResult result = fastica_one_unit(Z, config);

	const Eigen::VectorXd row = model.whitener.transpose() * result.w_whitened;
	const Eigen::VectorXd col = model.dewhitener * result.w_whitened;
	ApodizationProfile sep, mix;
	sep.weights.assign(n_elements, 0.0);
	mix.weights.assign(n_elements, 0.0);
	for (std::size_t r = 0; r < obs.rows(); ++r) {
		sep.weights[obs.row_element_map[r]] = row[static_cast<Eigen::Index>(r)];
		mix.weights[obs.row_element_map[r]] = col[static_cast<Eigen::Index>(r)];
	}
	result.w_aperture = sep.canonicalized();
	result.mixing_column = mix.canonicalized();
	return result;
}

} // namespace pwica
