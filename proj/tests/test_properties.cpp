#include <gtest/gtest.h>

#include "properties.hpp"

using namespace vt_test;

namespace {

void expect_ok(const SuiteResult& s) { EXPECT_TRUE(s.ok()) << s.summary(); }

}  // namespace

TEST(Property, SplittingIdentity) { expect_ok(splitting_identity_suite()); }

TEST(Property, LpCertificates) { expect_ok(lp_certificate_suite()); }

TEST(Property, ParticipationStructure) { expect_ok(participation_suite()); }

TEST(Property, EnvyGraph) { expect_ok(envy_graph_suite()); }

TEST(Property, Constructors) {
  for (const auto& s : constructor_suites()) expect_ok(s);
}

TEST(Property, PersistenceBelowThreshold) { expect_ok(persistence_suite()); }

TEST(Property, ApprovalPayoff) { expect_ok(approval_suite()); }
