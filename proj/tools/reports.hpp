#pragma once

// JSON views of the library's report structs (nlohmann ADL hooks).

#include <complex>

#include <json.hpp>

#include "fplab/acceptance.hpp"
#include "fplab/inequalities.hpp"
#include "fplab/jump_sde.hpp"
#include "fplab/kernels.hpp"
#include "fplab/semigroup.hpp"
#include "fplab/spectra.hpp"

namespace fplab {

using nlohmann::json;

json complex_json(std::complex<double> z);

void to_json(json& j, const SpectrumReport& r);
void to_json(json& j, const DecayReport& r);
void to_json(json& j, const DecaySweepReport& r);
void to_json(json& j, const GapSweepReport& r);
void to_json(json& j, const ProjectorReport& r);  // without the matrix
void to_json(json& j, const PerturbationReport& r);
void to_json(json& j, const FourierRatio& r);
void to_json(json& j, const DirichletForm& r);
void to_json(json& j, const GradientCheck& r);
void to_json(json& j, const PsiProfile& r);  // profile omitted; see the CSV
void to_json(json& j, const DissipativityReport& r);
void to_json(json& j, const AdjointReport& r);
void to_json(json& j, const RegularizationReport& r);
void to_json(json& j, const SobolevIdentity& r);
void to_json(json& j, const CouplingReport& r);
void to_json(json& j, const WassersteinReport& r);
void to_json(json& j, const CriterionResult& r);

} // namespace fplab
