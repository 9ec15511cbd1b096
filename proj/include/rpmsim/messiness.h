#pragma once

#include "rpmsim/cohort.h"

namespace rpm {

/// Adds export-time realism defects (duplicate rows, irrelevant patient
/// comments) and records each one in the truth ledger. Alerts and
/// responses are left untouched.
Cohort inject_messiness(const Cohort& cohort);

/// Inverse of inject_messiness: drops injected duplicates and clears
/// injected comments, leaving an empty ledger.
Cohort strip_messiness(const Cohort& cohort);

} // namespace rpm
