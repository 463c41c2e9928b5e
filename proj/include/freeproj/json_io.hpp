#pragma once

#include <nlohmann/json.hpp>

#include "freeproj/block_spectrum.hpp"
#include "freeproj/limit_laws.hpp"
#include "freeproj/montecarlo.hpp"
#include "freeproj/ncpoly.hpp"
#include "freeproj/subspace.hpp"

// JSON conventions: real matrices as row-major arrays of numbers, complex
// matrices as row-major arrays of [re, im] pairs; polynomials as an object
// {word: [re, im]} with "1" for the empty word; laws as
// {atoms: [[loc, mass]...], pieces: [{a, b, mass, kind, params}...]}.
namespace freeproj {

nlohmann::json to_json(const Subspace& s);
Subspace subspace_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PrincipalAngleSpectrum& s);
PrincipalAngleSpectrum angle_spectrum_from_json(const nlohmann::json& j);

nlohmann::json to_json(const NCPolynomial& p);
NCPolynomial ncpoly_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SpectrumWithMultiplicity& s);

nlohmann::json to_json(const SpectralLaw& law);

// Experiment configuration, overridable by CLI flags. Unknown keys throw.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

}  // namespace freeproj
