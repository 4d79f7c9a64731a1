#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "crowdfusion/answers.hpp"
#include "crowdfusion/model.hpp"
#include "crowdfusion/rng.hpp"

using namespace crowdfusion;

TEST_CASE("derived streams are deterministic and distinct") {
    RngStream a = derive_stream(42, 7, purpose::kTruth);
    RngStream b = derive_stream(42, 7, purpose::kTruth);
    for (int i = 0; i < 16; ++i) REQUIRE(a.next_u64() == b.next_u64());

    RngStream c = derive_stream(42, 7, purpose::kAnswers);
    RngStream d = derive_stream(42, 8, purpose::kTruth);
    RngStream e = derive_stream(43, 7, purpose::kTruth);
    RngStream base = derive_stream(42, 7, purpose::kTruth);
    bool all_same_c = true, all_same_d = true, all_same_e = true;
    for (int i = 0; i < 16; ++i) {
        const std::uint64_t v = base.next_u64();
        all_same_c &= c.next_u64() == v;
        all_same_d &= d.next_u64() == v;
        all_same_e &= e.next_u64() == v;
    }
    REQUIRE_FALSE(all_same_c);
    REQUIRE_FALSE(all_same_d);
    REQUIRE_FALSE(all_same_e);
}

TEST_CASE("next_double lands in [0,1), next_below in [0,n)") {
    RngStream rng = derive_stream(1, 2, 3);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.next_double();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t v = rng.next_below(7);
        REQUIRE(v < 7);
        seen.insert(v);
    }
    REQUIRE(seen.size() == 7);
    REQUIRE(rng.next_below(1) == 0);
}

TEST_CASE("class codewords round-trip, most significant bit first") {
    const TruthWord t = encode_class(5, 3);
    REQUIRE(t.bits == std::vector<int>{1, 0, 1});
    for (int c = 0; c < 8; ++c) REQUIRE(decode_class(encode_class(c, 3).bits, 8) == c);

    // bit patterns outside the class range decode to the invalid marker
    REQUIRE(decode_class({1, 0, 1}, 5) == kInvalidCodeword);
    REQUIRE(decode_class({1, 0, 1}, 6) == 5);
}

TEST_CASE("model validation rejects bad shapes") {
    CrowdModel model;
    model.W = 10;
    model.N = 3;
    model.M = 8;
    model.skip_dist = DistributionSpec::fixed(0.5);
    model.reliability_dist = DistributionSpec::fixed(0.8);
    REQUIRE_NOTHROW(validate_model(model));

    CrowdModel bad = model;
    bad.W = 0;
    REQUIRE_THROWS_AS(validate_model(bad), ConfigError);
    bad = model;
    bad.N = 2; // 8 classes never fit 2 questions
    REQUIRE_THROWS_AS(validate_model(bad), ConfigError);
    bad = model;
    bad.M = 1;
    REQUIRE_THROWS_AS(validate_model(bad), ConfigError);
    bad = model;
    bad.alpha = 1.5;
    REQUIRE_THROWS_AS(validate_model(bad), ConfigError);
    bad = model;
    bad.skip_dist = DistributionSpec::fixed(1.2);
    REQUIRE_THROWS_AS(validate_model(bad), ConfigError);
    bad = model;
    bad.reliability_dist = DistributionSpec::uniform(0.9, 0.6); // inverted bounds
    REQUIRE_THROWS_AS(validate_model(bad), ConfigError);
}

TEST_CASE("greedy head count rounds half away from zero") {
    CrowdModel model;
    model.W = 15;
    model.alpha = 0.3; // 4.5 -> 5
    REQUIRE(model.greedy_count() == 5);
    model.W = 20;
    model.alpha = 0.11; // 2.2 -> 2
    REQUIRE(model.greedy_count() == 2);
    model.alpha = 0.0;
    REQUIRE(model.greedy_count() == 0);
    model.alpha = 1.0;
    REQUIRE(model.greedy_count() == 20);
}

TEST_CASE("profiles: greedy block first, honest draws per worker and question") {
    CrowdModel model;
    model.W = 12;
    model.N = 4;
    model.M = 16;
    model.skip_dist = DistributionSpec::uniform(0.2, 0.6);
    model.reliability_dist = DistributionSpec::uniform(0.6, 1.0);
    model.alpha = 0.25; // 3 greedy workers

    RngStream rng = derive_stream(9, 0, purpose::kProfiles);
    const auto profiles = sample_profiles(model, rng);
    REQUIRE(profiles.size() == 12);
    for (int w = 0; w < 3; ++w) {
        REQUIRE(profiles[w].greedy);
        for (int i = 0; i < 4; ++i) {
            REQUIRE(profiles[w].skip_probs[i] == 0.0);
            REQUIRE(profiles[w].reliabilities[i] == 0.5);
        }
    }
    std::set<double> distinct;
    for (std::size_t w = 3; w < profiles.size(); ++w) {
        REQUIRE_FALSE(profiles[w].greedy);
        for (int i = 0; i < 4; ++i) {
            REQUIRE(profiles[w].skip_probs[i] >= 0.2);
            REQUIRE(profiles[w].skip_probs[i] <= 0.6);
            REQUIRE(profiles[w].reliabilities[i] >= 0.6);
            REQUIRE(profiles[w].reliabilities[i] <= 1.0);
            distinct.insert(profiles[w].skip_probs[i]);
        }
    }
    // one draw per (worker, question), not one per worker
    REQUIRE(distinct.size() == 9 * 4);
}

TEST_CASE("answer generation follows the profile semantics") {
    CrowdModel model;
    model.W = 6;
    model.N = 3;
    model.M = 8;
    model.alpha = 0.5; // 3 greedy

    const TruthWord truth = encode_class(6, 3); // bits 1,1,0

    SECTION("m = 1 honest workers always skip, greedy never do") {
        model.skip_dist = DistributionSpec::fixed(1.0);
        model.reliability_dist = DistributionSpec::fixed(0.8);
        RngStream prof_rng = derive_stream(3, 0, purpose::kProfiles);
        RngStream ans_rng = derive_stream(3, 0, purpose::kAnswers);
        const auto profiles = sample_profiles(model, prof_rng);
        const auto answers = generate_answers(profiles, truth, ans_rng);
        for (int w = 0; w < 3; ++w) REQUIRE(answers[w].n_definitive() == 3);
        for (int w = 3; w < 6; ++w) REQUIRE(answers[w].n_definitive() == 0);
    }

    SECTION("m = 0 with perfect reliability reproduces the truth") {
        model.alpha = 0.0;
        model.skip_dist = DistributionSpec::fixed(0.0);
        model.reliability_dist = DistributionSpec::fixed(1.0);
        RngStream prof_rng = derive_stream(4, 0, purpose::kProfiles);
        RngStream ans_rng = derive_stream(4, 0, purpose::kAnswers);
        const auto answers = generate_answers(sample_profiles(model, prof_rng), truth, ans_rng);
        for (const AnswerWord& word : answers)
            for (int i = 0; i < 3; ++i)
                REQUIRE(static_cast<int>(word.symbols[i]) == truth.bits[i]);
    }

    SECTION("empirical skip and error rates sit near their means") {
        model.alpha = 0.0;
        model.W = 400;
        model.skip_dist = DistributionSpec::fixed(0.3);
        model.reliability_dist = DistributionSpec::fixed(0.75);
        RngStream prof_rng = derive_stream(5, 0, purpose::kProfiles);
        RngStream ans_rng = derive_stream(5, 0, purpose::kAnswers);
        const auto answers = generate_answers(sample_profiles(model, prof_rng), truth, ans_rng);
        int skips = 0, correct = 0, definitive = 0;
        for (const AnswerWord& word : answers)
            for (int i = 0; i < 3; ++i) {
                if (word.symbols[i] == AnswerSymbol::Skip) { ++skips; continue; }
                ++definitive;
                if (static_cast<int>(word.symbols[i]) == truth.bits[i]) ++correct;
            }
        const double skip_rate = static_cast<double>(skips) / (400.0 * 3.0);
        const double acc = static_cast<double>(correct) / definitive;
        REQUIRE(std::abs(skip_rate - 0.3) < 0.04);
        REQUIRE(std::abs(acc - 0.75) < 0.04);
    }
}
