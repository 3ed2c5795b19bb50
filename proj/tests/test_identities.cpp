#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <iostream>

#include "crjet/identities.hpp"

using namespace crjet;

TEST_CASE("catalog loads and every case verifies to zero residual") {
    auto cases = load_catalog();
    REQUIRE(cases.size() > 30);
    for (const auto& c : cases) {
        VerificationReport rep = verify(c);
        if (!rep.pass)
            std::cout << rep.text_line() << "\n";
        CHECK_MESSAGE(rep.pass, c.id);
    }
}

TEST_CASE("headline cases present with expected pde flags") {
    auto cases = load_catalog();
    auto find = [&](const std::string& id) -> const IdentityCase* {
        for (const auto& c : cases)
            if (c.id == id)
                return &c;
        return nullptr;
    };
    for (const char* id : {"eq2.5", "eq2.6", "eq2.7", "eq2.8", "eq2.9", "eq2.10", "eq2.11",
                           "eq2.12", "eq2.13", "eq2.14", "eq2.15", "eq2.16", "eq2.17", "eq2.18",
                           "eq3--17", "eq3-21-pointwise"})
        CHECK_MESSAGE(find(id) != nullptr, id);
    CHECK(find("eq2.7")->requires_pde);
    CHECK(!find("eq2.5")->requires_pde);
    CHECK(!find("eq2.17")->requires_pde);
}

TEST_CASE("glob filter") {
    CHECK(glob_match("eq2.*", "eq2.7"));
    CHECK(glob_match("*", "anything"));
    CHECK(!glob_match("eq2.*", "eq3--17"));
    CHECK(glob_match("eq2.1*", "eq2.10-step3"));
    CHECK(!glob_match("eq2.7", "eq2.17"));
}

TEST_CASE("third_order_identity_check") {
    ThirdOrderReport rep = third_order_identity_check();
    CHECK(rep.with_pde.pass);
    CHECK(rep.with_pde.residual_terms == 0);
    CHECK(rep.residual_without_pde > 0);
}

TEST_CASE("verify_lemma_3_1_pointwise") {
    VerificationReport rep = verify_lemma_3_1_pointwise();
    CHECK(rep.pass);
    CHECK(rep.id == "eq3--17");
}

TEST_CASE("pde-flagged headline identities genuinely need the equation") {
    auto cases = load_catalog();
    int checked = 0;
    for (const auto& c : cases) {
        if (!c.requires_pde)
            continue;
        if (c.id != "eq2.8" && c.id != "eq2.10" && c.id != "eq2.12")
            continue;
        IdentityCase weakened = c;
        weakened.requires_pde = false;
        VerificationReport rep = verify(weakened);
        CHECK_MESSAGE(!rep.pass, c.id, " should fail without the pde");
        CHECK(rep.residual_terms > 0);
        ++checked;
    }
    CHECK(checked == 3);
}
