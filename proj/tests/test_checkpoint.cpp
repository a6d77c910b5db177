#include <string>
#include <vector>

#include "doctest.h"
#include "hsd/checkpoint.hpp"
#include "hsd/common.hpp"
#include "hsd/model.hpp"
#include "helpers.hpp"

using hsd::CharFallbackConfig;
using hsd::ModelParams;
using hsd::Real;

namespace {

std::vector<Real> flatten(const ModelParams& m) {
    std::vector<Real> out;
    hsd::visit_tensors(const_cast<ModelParams&>(m), [&out](auto& t) {
        for (Eigen::Index i = 0; i < t.size(); ++i) out.push_back(t(i));
    });
    return out;
}

ModelParams sample_model() {
    return hsd::init_model(6, 4, {{"tone", {"up", "down", "flat"}}, {"mini", {"warm", "cold"}}},
                           2024);
}

}  // namespace

TEST_CASE("checkpoint round trip is bit exact") {
    testutil::TempDir dir;
    const ModelParams m = sample_model();
    const CharFallbackConfig fb{3, 0xabcdef1234ULL};
    const std::string path = dir.file("model.bin");

    hsd::save_checkpoint(path, m, fb);
    const hsd::Checkpoint loaded = hsd::load_checkpoint(path);

    CHECK(loaded.model.embed_dim == 6);
    CHECK(loaded.model.hidden == 4);
    CHECK(loaded.fallback.ngram_len == 3);
    CHECK(loaded.fallback.seed == 0xabcdef1234ULL);
    REQUIRE(loaded.model.heads.size() == 2);
    CHECK(loaded.model.heads[0].task == "tone");
    CHECK(loaded.model.heads[0].labels == std::vector<std::string>{"up", "down", "flat"});
    CHECK(loaded.model.heads[1].task == "mini");
    CHECK(loaded.model.heads[1].labels == std::vector<std::string>{"warm", "cold"});

    const auto a = flatten(m);
    const auto b = flatten(loaded.model);
    REQUIRE(a.size() == b.size());
    bool identical = true;
    for (std::size_t i = 0; i < a.size(); ++i) identical &= (a[i] == b[i]);
    CHECK(identical);
}

TEST_CASE("saving twice yields identical bytes") {
    testutil::TempDir dir;
    const ModelParams m = sample_model();
    const CharFallbackConfig fb{3, 7};
    const std::string p1 = dir.file("a.bin");
    const std::string p2 = dir.file("b.bin");
    hsd::save_checkpoint(p1, m, fb);
    hsd::save_checkpoint(p2, m, fb);
    CHECK(testutil::read_file(p1) == testutil::read_file(p2));
}

TEST_CASE("checkpoint header sanity") {
    testutil::TempDir dir;
    const std::string path = dir.file("m.bin");
    hsd::save_checkpoint(path, sample_model(), CharFallbackConfig{3, 1});
    const std::string bytes = testutil::read_file(path);
    REQUIRE(bytes.size() > 8);
    CHECK(bytes.substr(0, 8) == "HSDCKPT1");
}

TEST_CASE("load rejects corrupted files") {
    testutil::TempDir dir;
    const ModelParams m = sample_model();
    const std::string path = dir.file("m.bin");
    hsd::save_checkpoint(path, m, CharFallbackConfig{3, 1});
    const std::string good = testutil::read_file(path);

    SUBCASE("bad magic") {
        std::string bad = good;
        bad[0] = 'X';
        const std::string p = dir.file("bad_magic.bin", bad);
        CHECK_THROWS_AS(hsd::load_checkpoint(p), hsd::DataError);
    }

    SUBCASE("bad version") {
        std::string bad = good;
        bad[8] = static_cast<char>(9);
        const std::string p = dir.file("bad_version.bin", bad);
        CHECK_THROWS_AS(hsd::load_checkpoint(p), hsd::DataError);
    }

    SUBCASE("truncated tail") {
        const std::string p = dir.file("trunc.bin", good.substr(0, good.size() - 9));
        CHECK_THROWS_AS(hsd::load_checkpoint(p), hsd::DataError);
    }

    SUBCASE("truncated header") {
        const std::string p = dir.file("tiny.bin", good.substr(0, 10));
        CHECK_THROWS_AS(hsd::load_checkpoint(p), hsd::DataError);
    }

    SUBCASE("missing file") {
        CHECK_THROWS_AS(hsd::load_checkpoint(dir.file("absent.bin")), hsd::DataError);
    }
}
