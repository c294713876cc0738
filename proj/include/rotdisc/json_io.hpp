#pragma once

#include "rotdisc/cf.hpp"
#include "rotdisc/orbit.hpp"
#include "rotdisc/scheduler.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace rotdisc {

// All big integers travel as decimal strings: q values overflow native words
// after a handful of stages.

nlohmann::json digits_to_json(const DigitSequence& digits);
DigitSequence digits_from_json(const nlohmann::json& j,
                               StructureTag tag = StructureTag::Plain);

nlohmann::json convergents_to_json(const std::vector<Convergent>& cv);

nlohmann::json qindex_report_to_json(const QIndexReport& rep);
nlohmann::json band_report_to_json(const BandReport& rep);

nlohmann::json certificate_to_json(const StageCertificate& cert);
nlohmann::json build_result_to_json(const BuildResult& result, const std::string& mode);

SqueezeSpec squeeze_spec_from_json(const nlohmann::json& j);

std::string series_to_csv(const DiscrepancySeries& series);

}  // namespace rotdisc
