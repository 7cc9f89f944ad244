#pragma once

#include "support/seed.hpp"

namespace ssaf::testing {

// Seed catalog plus one synthetic requirement for each of the S2 and S3
// groups, and one security requirement.
inline Catalog extended_catalog() {
  Catalog c = seed_catalog();
  c.requirements.push_back({"FB-1", Domain::Safety, "synthetic", "Fail-safe shutdown", ReqType::FailureBehaviour});
  c.requirements.push_back({"DET-1", Domain::Safety, "synthetic", "Watchdog", ReqType::FailureDetection});
  c.requirements.push_back({"COM-1", Domain::Safety, "synthetic", "Message integrity", ReqType::Communication});
  c.requirements.push_back({"FPT_STM.1", Domain::Security, "CC Part 2", "Reliable time stamps", {}});
  c.classes[1].members.push_back("FPT_STM.1");
  return c;
}

}  // namespace ssaf::testing
