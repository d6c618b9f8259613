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
 * @file pwica.h C interface of the pwica library.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every call returning pwica_status leaves a message for the calling thread
 * in pwica_last_error() on failure. Output handles are only written on
 * success. Array getters take a capacity and fail with
 * PWICA_INVALID_ARGUMENT when it is too small; pass NULL to query the
 * required length through the count parameter.
 *
 *****************************************************************************/
#ifndef PWICA_H
#define PWICA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(PWICA_BUILDING)
#define PWICA_API __declspec(dllexport)
#else
#define PWICA_API __declspec(dllimport)
#endif
#else
#define PWICA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pwica_status {
	PWICA_OK = 0,
	PWICA_INVALID_ARGUMENT = 1,
	PWICA_IO = 2,
	PWICA_FORMAT = 3,
	PWICA_RANK_DEFICIENT = 4,
	PWICA_NOT_CONVERGED = 5,
	PWICA_INTERNAL = 6
} pwica_status;

typedef struct pwica_dataset pwica_dataset;
typedef struct pwica_image pwica_image;
typedef struct pwica_profile pwica_profile;

/** Message of the last failure on this thread ("" when none). */
PWICA_API const char* pwica_last_error(void);
PWICA_API const char* pwica_status_name(pwica_status status);
PWICA_API const char* pwica_version(void);
PWICA_API void pwica_string_free(char* s);

/* ---- datasets ---------------------------------------------------------- */

typedef struct pwica_dataset_info {
	size_t n_angles;
	size_t n_elements;
	size_t n_samples;
	size_t nx;
	size_t nz;
	size_t n_point_targets;
	size_t n_cysts;
	double sampling_rate;     /* Hz */
	double sound_speed;       /* m/s */
	double start_time;        /* s */
	double pitch;             /* m */
	double center_frequency;  /* Hz, 0 if unknown */
	uint64_t seed;
} pwica_dataset_info;

PWICA_API pwica_status pwica_dataset_read_native(const char* dir, pwica_dataset** out);

/** scan and phantom may be NULL. */
PWICA_API pwica_status pwica_dataset_read_challenge(const char* rf_path, const char* scan_path,
		const char* phantom_path, pwica_dataset** out);

PWICA_API pwica_status pwica_dataset_write_native(const pwica_dataset* ds, const char* dir);

/** Presets "sr", "sc", "er". dropped (may be NULL) receives the number of
 * scatterers left out because their echoes miss the trace window. */
PWICA_API pwica_status pwica_dataset_simulate(const char* preset, uint64_t seed, size_t n_angles,
		pwica_dataset** out, size_t* dropped);

/** Copy of ds with white Gaussian noise on the listed channels (0-based).
 * snr_db = INFINITY returns an identical copy. */
PWICA_API pwica_status pwica_dataset_add_noise(const pwica_dataset* ds, const size_t* channels,
		size_t n_channels, double snr_db, uint64_t seed, pwica_dataset** out);

PWICA_API pwica_status pwica_dataset_get_info(const pwica_dataset* ds, pwica_dataset_info* info);
PWICA_API pwica_status pwica_dataset_angles(const pwica_dataset* ds, double* out, size_t capacity,
		size_t* count);

/** Dataset name and layout tag; the strings live as long as the handle. */
PWICA_API const char* pwica_dataset_name(const pwica_dataset* ds);
PWICA_API const char* pwica_dataset_layout(const pwica_dataset* ds);

/** Metadata document (JSON); release with pwica_string_free. */
PWICA_API pwica_status pwica_dataset_metadata_json(const pwica_dataset* ds, char** out);

/** count acquisition indices symmetric about 0 degrees (count odd, or all). */
PWICA_API pwica_status pwica_dataset_angle_subset(const pwica_dataset* ds, size_t count,
		size_t* out, size_t capacity, size_t* n_out);

PWICA_API void pwica_dataset_free(pwica_dataset* ds);

/* ---- beamforming -------------------------------------------------------- */

typedef enum pwica_method { PWICA_METHOD_DAS = 0, PWICA_METHOD_CF = 1, PWICA_METHOD_ICA = 2 } pwica_method;

typedef enum pwica_profile_mapping {
	PWICA_MAPPING_ELEMENT = 0,
	PWICA_MAPPING_RESAMPLE = 1,
	PWICA_MAPPING_CENTERED = 2
} pwica_profile_mapping;

typedef enum pwica_observation {
	PWICA_OBSERVATION_FULL = 0,
	PWICA_OBSERVATION_MASKED = 1
} pwica_observation;

typedef enum pwica_contrast { PWICA_CONTRAST_LOGCOSH = 0, PWICA_CONTRAST_GAUSS = 1 } pwica_contrast;

typedef struct pwica_beamform_options {
	double f_number;
	char window[32];                 /* "tukey:0.25", "hann", "boxcar" */
	int linear_interpolation;        /* 0 = nearest sample */
	pwica_profile_mapping profile_mapping;
	pwica_observation observation;
	double ica_crop_depth;           /* m, 0 = deepest image row */
	int reuse_zero_angle_profile;    /* compounding: estimate once at 0 degrees */
	int allow_nonconverged;
	uint64_t ica_seed;
	int ica_max_iterations;
	double ica_epsilon;
	pwica_contrast ica_contrast;
	double ica_a1;
	double dynamic_range;            /* dB */
} pwica_beamform_options;

/** Library defaults. */
PWICA_API void pwica_beamform_options_init(pwica_beamform_options* options);

/** Beamforms and compounds the listed acquisition angles. For ICA a profile
 * handle is returned through profile (may be NULL); with
 * allow_nonconverged = 0 a non-converged estimate fails with
 * PWICA_NOT_CONVERGED. */
PWICA_API pwica_status pwica_beamform(const pwica_dataset* ds, pwica_method method,
		const size_t* angle_indices, size_t n_angles, const pwica_beamform_options* options,
		pwica_image** image, pwica_profile** profile);

/* ---- images -------------------------------------------------------------- */

typedef struct pwica_image_info {
	size_t nx;
	size_t nz;
	double dynamic_range;
	int has_rf;   /* 0 for images read back from CSV */
} pwica_image_info;

PWICA_API pwica_status pwica_image_get_info(const pwica_image* img, pwica_image_info* info);

/** B-mode values in dB, (z, x) with x fastest. */
PWICA_API pwica_status pwica_image_bmode(const pwica_image* img, double* out, size_t capacity,
		size_t* count);
PWICA_API pwica_status pwica_image_rf(const pwica_image* img, double* out, size_t capacity,
		size_t* count);
PWICA_API pwica_status pwica_image_axes(const pwica_image* img, double* x, double* z);

/** Format from the extension: .pgm, .png or .csv. */
PWICA_API pwica_status pwica_image_write(const pwica_image* img, const char* path);
PWICA_API pwica_status pwica_image_read_csv(const char* path, pwica_image** out);
PWICA_API void pwica_image_free(pwica_image* img);

/* ---- metrics ------------------------------------------------------------- */

typedef struct pwica_metrics {
	int has_fwhm;
	double fwhm_axial_mm;
	double fwhm_lateral_mm;
	size_t targets_measured;
	int has_cnr;
	double cnr_db;
} pwica_metrics;

/** FWHM over the dataset's point targets (linear envelope, half window
 * 1.5 mm) and mean CNR over its cysts, whichever the dataset defines. */
PWICA_API pwica_status pwica_image_metrics(const pwica_image* img, const pwica_dataset* ds,
		pwica_metrics* out);

/** RMSE of the B-mode dB values of two images on the same grid. */
PWICA_API pwica_status pwica_image_rmse(const pwica_image* a, const pwica_image* b, double* out);

/* ---- apodization profiles ------------------------------------------------ */

typedef struct pwica_profile_info {
	size_t length;
	int is_estimated;
	int converged;
	int iterations_used;
	uint64_t seed;
	size_t estimation_angle;
} pwica_profile_info;

typedef struct pwica_spectrum_info {
	size_t n_bins;
	double mainlobe_width;   /* cycles per element */
	double sidelobe_db;
	double leakage;
} pwica_spectrum_info;

/** Estimates the ICA apodization from the angle nearest 0 degrees. */
PWICA_API pwica_status pwica_profile_estimate(const pwica_dataset* ds,
		const pwica_beamform_options* options, pwica_profile** out);

/** Parametric window of the given length, e.g. "tukey:0.25". */
PWICA_API pwica_status pwica_profile_window(const char* window, size_t length, pwica_profile** out);

PWICA_API pwica_status pwica_profile_get_info(const pwica_profile* p, pwica_profile_info* info);
PWICA_API pwica_status pwica_profile_weights(const pwica_profile* p, double* out, size_t capacity,
		size_t* count);

/** Spectrum descriptors; frequency / magnitude_db (may be NULL) receive
 * n_bins values when capacity suffices. */
PWICA_API pwica_status pwica_profile_spectrum(const pwica_profile* p, size_t n_fft,
		pwica_spectrum_info* info, double* frequency, double* magnitude_db, size_t capacity);

PWICA_API void pwica_profile_free(pwica_profile* p);

#ifdef __cplusplus
}
#endif

#endif /* PWICA_H */
