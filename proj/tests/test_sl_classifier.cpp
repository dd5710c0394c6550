#include <cmath>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "doctest.h"
#include "rcsclass/noise.hpp"
#include "rcsclass/sl_classifier.hpp"
#include "test_support.hpp"

using namespace rcs;

namespace {

RcsSignature sig_of(const std::string& id, const std::vector<double>& m2) {
    RcsSignature s;
    s.target_id = id;
    s.frequency_ghz = 15.0;
    const double step = 360.0 / static_cast<double>(m2.size());
    for (std::size_t i = 0; i < m2.size(); ++i) {
        s.angles_deg.push_back(step * static_cast<double>(i));
        s.rcs_m2.push_back(m2[i]);
    }
    return s;
}

// Pooled samples whose decibel image is drawn from two well-separated normal
// modes; the linear samples feed the mixture-family trainer.
RcsSignature bimodal_class(const std::string& id, std::uint64_t seed,
                           std::size_t n = 300) {
    Rng rng(seed);
    std::vector<double> m2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double db = i % 2 == 0 ? rng.normal(-10.0, 1.0) : rng.normal(10.0, 1.0);
        m2[i] = dbsm_to_m2(db);
    }
    return sig_of(id, m2);
}

Dataset two_tone_dataset() {
    std::vector<double> a(12), b(12);
    for (std::size_t i = 0; i < 12; ++i) {
        a[i] = 1.0 + static_cast<double>(i);         // mean 6.5
        b[i] = 10.0 * (1.0 + static_cast<double>(i));  // mean 65
    }
    return Dataset::from_signatures({sig_of("a", a), sig_of("b", b)});
}

}  // namespace

TEST_CASE("exponential-family training stores each class's pooled mean") {
    const Dataset data = two_tone_dataset();
    for (SlFamily fam : {SlFamily::swerling12, SlFamily::swerling34}) {
        const SlModel model = train_sl(data, fam);
        REQUIRE(model.classes == std::vector<std::string>{"a", "b"});
        REQUIRE(model.densities.size() == 2);
        const auto& pa = std::get<ChiSquareParams>(model.densities[0].params);
        const auto& pb = std::get<ChiSquareParams>(model.densities[1].params);
        const double want_m = fam == SlFamily::swerling12 ? 1.0 : 2.0;
        CHECK(pa.degrees == want_m);
        CHECK(pb.degrees == want_m);
        CHECK(pa.mean_rcs == doctest::Approx(6.5).epsilon(1e-12));
        CHECK(pb.mean_rcs == doctest::Approx(65.0).epsilon(1e-12));
        CHECK(model.training_pools[0].size() == 12);
    }
}

TEST_CASE("class priors are uniform") {
    FleetSpec spec;
    spec.num_classes = 6;
    spec.seed = 3;
    const Dataset data = generate_fleet(spec);
    const SlModel model = train_sl(data, SlFamily::gamma_mle);
    REQUIRE(model.priors.size() == 6);
    for (double p : model.priors) CHECK(p == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(model.classes.front() == "uav01");
    CHECK(model.classes.back() == "uav06");
}

TEST_CASE("log-posteriors equal summed log densities plus the log prior") {
    const Dataset data = two_tone_dataset();
    const SlModel model = train_sl(data, SlFamily::swerling12);
    const RcsSignature probe = sig_of("probe", {2.0, 7.0, 40.0, 0.5});
    const SlPrediction pred = classify_sl(model, probe);
    REQUIRE(pred.log_posteriors.size() == 2);
    for (std::size_t c = 0; c < 2; ++c) {
        const auto& p = std::get<ChiSquareParams>(model.densities[c].params);
        double expect = std::log(model.priors[c]);
        for (double x : probe.rcs_m2) expect += std::log(pdf(p, x));
        CHECK(pred.log_posteriors[c] == doctest::Approx(expect).epsilon(1e-9));
    }
    CHECK(pred.class_index == 0);
    CHECK(pred.label == "a");
}

TEST_CASE("density wrapper evaluates the same log pdf as the family") {
    DensityModel d;
    d.params = GammaParams{2.0, 0.5};
    CHECK(d.log_pdf_at(3.0) ==
          doctest::Approx(std::log(pdf(GammaParams{2.0, 0.5}, 3.0))).epsilon(1e-12));
    d.params = GpdParams{1.5, 2.0};
    CHECK(d.log_pdf_at(0.7) ==
          doctest::Approx(std::log(pdf(GpdParams{1.5, 2.0}, 0.7))).epsilon(1e-12));
}

TEST_CASE("mixture family discovers two decibel modes per class") {
    const Dataset data = Dataset::from_signatures(
        {bimodal_class("a", 101), bimodal_class("b", 202)});
    SlOptions opt;
    opt.seed = 5;
    const SlModel model = train_sl(data, SlFamily::gmm, opt);
    for (const auto& d : model.densities) {
        const auto& gp = std::get<GmmParams>(d.params);
        CHECK(gp.size() == 2);
    }
}

TEST_CASE("well-separated fleet classifies noisy copies almost perfectly") {
    FleetSpec spec;
    spec.num_classes = 3;
    spec.separation_db = 10.0;
    spec.seed = 11;
    const Dataset data = generate_fleet(spec);
    const SlModel model = train_sl(data, SlFamily::swerling12);
    int correct = 0, total = 0;
    for (const auto& sig : data.signatures) {
        for (int t = 0; t < 30; ++t) {
            NoiseSpec ns;
            ns.snr_db = 15.0;
            ns.seed = derive_seed(777, static_cast<std::uint64_t>(total));
            const SlPrediction pred = classify_sl(model, add_noise(sig, ns));
            correct += pred.label == sig.target_id;
            ++total;
        }
    }
    CHECK(static_cast<double>(correct) / total >= 0.99);
}

TEST_CASE("a single-class model always answers with the class") {
    const Dataset data = Dataset::from_signatures(
        {sig_of("only", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12})});
    const SlModel model = train_sl(data, SlFamily::swerling12);
    const SlPrediction pred = classify_sl(model, testsup::random_signature(6));
    CHECK(pred.label == "only");
    CHECK(pred.class_index == 0);
    CHECK(pred.log_posteriors.size() == 1);
}

TEST_CASE("prediction is the argmax with ties toward the smaller class name") {
    // Identical pools give identical densities and priors, hence exact ties.
    std::vector<double> pool(12);
    for (std::size_t i = 0; i < 12; ++i) pool[i] = 1.0 + static_cast<double>(i);
    const Dataset data =
        Dataset::from_signatures({sig_of("zz", pool), sig_of("aa", pool)});
    const SlModel model = train_sl(data, SlFamily::swerling12);
    const SlPrediction pred = classify_sl(model, testsup::random_signature(8));
    CHECK(pred.log_posteriors[0] == pred.log_posteriors[1]);
    CHECK(pred.label == "aa");

    // On random probes the reported index is always the argmax.
    FleetSpec spec;
    spec.num_classes = 4;
    spec.seed = 21;
    const SlModel fleet = train_sl(generate_fleet(spec), SlFamily::gamma_mle);
    for (std::uint64_t s = 1; s <= 10; ++s) {
        const SlPrediction p = classify_sl(fleet, testsup::random_signature(s));
        int best = 0;
        for (std::size_t c = 1; c < p.log_posteriors.size(); ++c)
            if (p.log_posteriors[c] > p.log_posteriors[best]) best = static_cast<int>(c);
        CHECK(p.class_index == best);
        CHECK(p.label == fleet.classes[static_cast<std::size_t>(best)]);
    }
}

TEST_CASE("classes with fewer than ten pooled samples are rejected") {
    std::vector<double> nine(9, 1.0), ten(10, 1.0);
    for (std::size_t i = 0; i < nine.size(); ++i) nine[i] += static_cast<double>(i);
    for (std::size_t i = 0; i < ten.size(); ++i) ten[i] += static_cast<double>(i);
    CHECK_THROWS_AS(train_sl(Dataset::from_signatures(
                                 {sig_of("small", nine), sig_of("big", ten)}),
                             SlFamily::swerling12),
                    ValidationError);
    CHECK_NOTHROW(train_sl(Dataset::from_signatures(
                               {sig_of("small", ten), sig_of("big", ten)}),
                           SlFamily::swerling12));
}

TEST_CASE("training is deterministic in the option seed") {
    const Dataset data = Dataset::from_signatures(
        {bimodal_class("a", 301), bimodal_class("b", 302)});
    SlOptions opt;
    opt.seed = 40;
    const SlModel m1 = train_sl(data, SlFamily::gmm, opt);
    const SlModel m2 = train_sl(data, SlFamily::gmm, opt);
    const RcsSignature probe = bimodal_class("probe", 303, 60);
    const SlPrediction p1 = classify_sl(m1, probe);
    const SlPrediction p2 = classify_sl(m2, probe);
    CHECK(p1.label == p2.label);
    REQUIRE(p1.log_posteriors.size() == p2.log_posteriors.size());
    for (std::size_t i = 0; i < p1.log_posteriors.size(); ++i)
        CHECK(p1.log_posteriors[i] == p2.log_posteriors[i]);
}

TEST_CASE("refitting from the stored pools reproduces the model") {
    FleetSpec spec;
    spec.num_classes = 3;
    spec.seed = 31;
    const Dataset data = generate_fleet(spec);
    for (SlFamily fam : {SlFamily::swerling12, SlFamily::gamma_mle,
                         SlFamily::gpd_mle, SlFamily::gmm}) {
        const SlModel model = train_sl(data, fam);
        const SlModel again = refit_sl(model);
        for (std::uint64_t s = 50; s < 55; ++s) {
            const auto probe = testsup::random_signature(s);
            const SlPrediction p1 = classify_sl(model, probe);
            const SlPrediction p2 = classify_sl(again, probe);
            CHECK(p1.label == p2.label);
            for (std::size_t i = 0; i < p1.log_posteriors.size(); ++i)
                CHECK(p1.log_posteriors[i] ==
                      doctest::Approx(p2.log_posteriors[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("family names round-trip through their string forms") {
    for (SlFamily fam : {SlFamily::swerling12, SlFamily::swerling34,
                         SlFamily::gamma_mle, SlFamily::gpd_mle, SlFamily::gmm})
        CHECK(sl_family_from_string(to_string(fam)) == fam);
    CHECK_THROWS_AS(sl_family_from_string("nope"), ValidationError);
}
