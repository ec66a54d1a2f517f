#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;  // stdout and stderr together
};

Run execute(const std::string& args, const std::string& env, bool with_stderr) {
    std::string cmd = env + (env.empty() ? "" : " ") + std::string(NNREPR_CLI) + " " + args +
                      (with_stderr ? " 2>&1" : " 2>/dev/null");
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

Run nnrepr(const std::string& args, const std::string& env = "") { return execute(args, env, true); }

// Stdout only, for commands whose JSON goes to stdout.
Run nnrepr_stdout(const std::string& args) { return execute(args, "", false); }

fs::path scratch() {
    static fs::path dir = [] {
        auto d = fs::current_path() / "cli_scratch";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string file(const std::string& name, const std::string& contents) {
    auto path = scratch() / name;
    std::ofstream(path) << contents;
    return path.string();
}

std::string path(const std::string& name) { return (scratch() / name).string(); }

std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json json_file(const std::string& p) { return Json::parse(slurp(p)); }

bool contains(const std::string& haystack, const std::string& needle) { return haystack.find(needle) != std::string::npos; }

const char* kXor = R"({"schema_version":"1","arity":2,"anchors":[["0","0"],["1/2","1/2"],["1","1"]],"labels":["NEG","POS","NEG"]})";

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("construct examples") {
        auto comp = nnrepr("construct --fn comp --n 10 --out " + path("comp10.json"));
        CHECK(comp.code == 0);
        CHECK(contains(comp.out, "size: 20 anchors"));
        auto doc = json_file(path("comp10.json"));
        CHECK(doc["anchors"].size() == 20);
        auto analyzed = nnrepr("analyze --json --anchors " + path("comp10.json"));
        CHECK(Json::parse(analyzed.out)["resolution_bits"].get<int>() <= 6);

        auto eq = nnrepr("construct --fn eq --n 10 --eq-matrix identity --out " + path("eq10.json"));
        CHECK(eq.code == 0);
        CHECK(contains(eq.out, "size: 21 anchors"));
        CHECK(contains(eq.out, "resolution: 2 bits"));

        auto omb = nnrepr_stdout("construct --fn omb --n 2 --drop-zero-anchor");
        CHECK(omb.code == 0);
        CHECK(Json::parse(omb.out)["anchors"].size() == 2);

        auto csv = nnrepr("construct --fn comp --n 1 --out " + path("comp1.json") + " --csv " + path("comp1.csv"));
        CHECK(csv.code == 0);
        CHECK(slurp(path("comp1.csv")) == "x1,x2,label\n1,0,POS\n-1/4,5/4,NEG\n");
    }

    TEST_CASE("construct errors") {
        CHECK(nnrepr("construct --fn omb --n 3 --drop-zero-anchor").code == 2);
        CHECK(nnrepr("construct --fn comp").code == 2);
        CHECK(nnrepr("construct --fn comp --n 3 --w 1,2").code == 2);
        CHECK(nnrepr("construct --fn lt --w 1,1").code == 2);
        CHECK(nnrepr("construct --fn lt --w 0,0 --b 1").code == 2);
        CHECK(nnrepr("construct --fn elt --w 1,1 --b 3").code == 2);
        CHECK(nnrepr("construct --fn xyz --n 2").code == 2);
        CHECK(nnrepr("construct --fn table --bits 0110").code == 2);
        CHECK(nnrepr("construct --fn comp --n 2 --eq-matrix identity").code == 2);
        CHECK(nnrepr("construct --bogus").code == 2);
        CHECK(nnrepr("").code == 2);
        file("dup.txt", "1 1\n");
        auto refuted = nnrepr("construct --fn eq --eq-matrix " + path("dup.txt"));
        CHECK(refuted.code == 2);
        CHECK(contains(refuted.out, "refuted"));
    }

    TEST_CASE("verify examples") {
        auto xor_file = file("xor.json", kXor);
        CHECK(nnrepr("verify --anchors " + xor_file + " --fn table --bits 0110").code == 0);

        auto relabeled = file("xor_neg.json", R"({"arity":2,"anchors":[["0","0"],["1/2","1/2"],["1","1"]],"labels":["NEG","NEG","NEG"]})");
        auto fail = nnrepr_stdout("verify --anchors " + relabeled + " --fn table --bits 0110");
        CHECK(fail.code == 1);
        auto report = Json::parse(fail.out);
        CHECK(report["counterexample_count"] == 2);
        CHECK(report["counterexamples"][0]["x"] == "01");
        CHECK(report["counterexamples"][1]["x"] == "10");

        auto ragged = file("ragged.json", R"({"anchors":[["0","0"],["1/2"],["1","1"]],"labels":["NEG","POS","NEG"]})");
        auto bad = nnrepr("verify --anchors " + ragged + " --fn table --bits 0110");
        CHECK(bad.code == 2);
        CHECK(contains(bad.out, "line 2"));

        auto syntax = file("syntax.json", "{\"anchors\": [\n  [\"0\", \n");
        CHECK(nnrepr("verify --anchors " + syntax + " --fn table --bits 0110").code == 2);
        CHECK(nnrepr("verify --anchors " + path("missing.json") + " --fn table --bits 0110").code == 2);
        CHECK(nnrepr("verify --anchors " + xor_file + " --fn table --bits 01101001").code == 2);
    }

    TEST_CASE("verify is identical across worker counts") {
        REQUIRE(nnrepr("construct --fn eq --n 12 --eq-matrix identity --out " + path("eq12.json")).code == 0);
        auto one = nnrepr("verify --anchors " + path("eq12.json") + " --fn eq --n 12 --workers 1 --no-elapsed --report " + path("r1.json"));
        auto eight = nnrepr("verify --anchors " + path("eq12.json") + " --fn eq --n 12 --workers 8 --no-elapsed --report " + path("r8.json"));
        CHECK(one.code == 0);
        CHECK(eight.code == 0);
        CHECK(slurp(path("r1.json")) == slurp(path("r8.json")));
        CHECK(json_file(path("r1.json"))["pass"] == true);
    }

    TEST_CASE("verify falls back to the recorded function") {
        REQUIRE(nnrepr("construct --fn omb --n 9 --out " + path("omb9.json")).code == 0);
        CHECK(nnrepr("verify --anchors " + path("omb9.json")).code == 0);
        CHECK(nnrepr("verify --anchors " + path("omb9.json") + " --fn comp --n 4").code == 2);
        CHECK(nnrepr("verify --anchors " + file("bare.json", kXor)).code == 2);
    }

    TEST_CASE("arity cap from the environment") {
        REQUIRE(nnrepr("construct --fn comp --n 6 --out " + path("comp6.json")).code == 0);
        CHECK(nnrepr("verify --anchors " + path("comp6.json"), "NNREPR_MAX_ARITY=10").code == 3);
        CHECK(nnrepr("verify --anchors " + path("comp6.json"), "NNREPR_MAX_ARITY=12").code == 0);
    }

    TEST_CASE("analyze examples") {
        auto xor_doc = Json::parse(nnrepr("analyze --json --anchors " + file("xor.json", kXor)).out);
        CHECK(xor_doc["size"] == 3);
        CHECK(xor_doc["resolution_bits"] == 2);
        CHECK(xor_doc["labels"]["POS"] == 1);
        CHECK(xor_doc["squared_norms"] == Json::parse(R"(["0","1/2","2"])"));

        auto zero = Json::parse(nnrepr("analyze --json --anchors " + file("zero.json", R"({"anchors":[["0","0","0"]],"labels":["NEG"]})")).out);
        CHECK(zero["size"] == 1);
        CHECK(zero["resolution_bits"] == 1);

        REQUIRE(nnrepr("construct --fn comp --n 4 --out " + path("comp4.json")).code == 0);
        auto comp4 = Json::parse(nnrepr("analyze --json --anchors " + path("comp4.json")).out);
        CHECK(comp4["size"] == 8);
        CHECK(comp4["resolution_bits"] == 5);

        auto text = nnrepr("analyze --anchors " + path("xor.json"));
        CHECK(text.code == 0);
        CHECK(contains(text.out, "size: 3"));
        CHECK(contains(text.out, "resolution: 2 bits"));
        CHECK(nnrepr("analyze --anchors " + file("ragged2.json", R"({"anchors":[["0"],["1","1"]],"labels":["NEG","POS"]})")).code == 2);
    }

    TEST_CASE("eqmatrix examples") {
        auto id = nnrepr("eqmatrix validate identity --n 8");
        CHECK(id.code == 0);
        CHECK(Json::parse(id.out)["verdict"] == "proven");

        auto dup = nnrepr("eqmatrix validate " + file("dup.txt", "1 1\n"));
        CHECK(dup.code == 1);
        CHECK(Json::parse(dup.out)["witness_text"] == "(1,-1)");

        auto pow2 = nnrepr("eqmatrix validate pow2 --n 10");
        CHECK(pow2.code == 0);
        CHECK(Json::parse(pow2.out)["verdict"] == "proven");

        auto bad = nnrepr("eqmatrix validate " + file("bad.txt", "1 a\n"));
        CHECK(bad.code == 2);
        CHECK(contains(bad.out, "line 1, column 2"));

        std::string wide;
        for (int j = 0; j < 41; ++j) wide += "1 ";
        CHECK(nnrepr("eqmatrix validate " + file("wide.txt", wide + "\n")).code == 3);

        auto show = nnrepr("eqmatrix show " + file("m.json", R"({"rows":[[1,2],[3,1]]})"));
        CHECK(show.code == 0);
        CHECK(Json::parse(show.out)["status"] == "unchecked");
        CHECK(Json::parse(show.out)["row_norms"] == Json::parse(R"(["5","10"])"));
        CHECK(nnrepr("eqmatrix frobnicate identity --n 2").code == 2);
        CHECK(nnrepr("eqmatrix validate identity").code == 2);
    }

    TEST_CASE("lowerbound examples") {
        auto xor_run = nnrepr("lowerbound --bits 0110");
        CHECK(xor_run.code == 0);
        CHECK(contains(xor_run.out, "not separable ⇒ NN(f) ≥ 3"));

        auto and_run = nnrepr("lowerbound --bits 0001");
        CHECK(contains(and_run.out, "separable"));
        CHECK_FALSE(contains(and_run.out, "not separable"));

        auto zero_run = nnrepr("lowerbound --bits 0000");
        CHECK(contains(zero_run.out, "separable (constant)"));

        auto json_run = nnrepr("lowerbound --json --bits 01101001");
        CHECK(Json::parse(json_run.out)["separable"] == false);

        CHECK(nnrepr("lowerbound --bits " + std::string(8192, '0')).code == 3);
        CHECK(nnrepr("lowerbound --bits 012").code == 2);
        CHECK(nnrepr("lowerbound --fn lt --w 1,2,3 --b 3").code == 0);
    }

    TEST_CASE("property: constructed anchors verify with the same function flags") {
        const char* grid[] = {
            "--fn lt --w 1,1 --b 1",        "--fn lt --w 3,-2,5,1,-4 --b 2",  "--fn lt --w 1,2,4,8,16,32 --b 21",
            "--fn elt --w 1,-1 --b 0",      "--fn elt --w 2,3,5 --b 5",       "--fn elt --w 4,-3,2,2,-1,7 --b 6",
            "--fn eq --n 1",                "--fn eq --n 5 --eq-matrix pow2", "--fn eq --n 6 --eq-matrix identity",
            "--fn comp --n 1",              "--fn comp --n 5",                "--fn omb --n 1",
            "--fn omb --n 9",               "--fn omb --n 8 --drop-zero-anchor",
            "--fn table --bits 0001",       "--fn table --bits 00010111",     "--fn table --bits 1111",
        };
        int k = 0;
        for (const char* flags : grid) {
            std::string f = flags;
            auto out = path("grid" + std::to_string(k++) + ".json");
            REQUIRE_MESSAGE(nnrepr("construct " + f + " --out " + out).code == 0, f);
            std::string verify_flags = f;
            for (const char* drop : {" --eq-matrix pow2", " --eq-matrix identity", " --drop-zero-anchor"}) {
                auto pos = verify_flags.find(drop);
                if (pos != std::string::npos) verify_flags.erase(pos, std::string(drop).size());
            }
            CHECK_MESSAGE(nnrepr("verify --anchors " + out + " " + verify_flags + " --workers 2").code == 0, f);
        }
        file("compact.txt", "# two rows\n1 2 4\n1 -1 3\n");
        REQUIRE(nnrepr("construct --fn eq --eq-matrix " + path("compact.txt") + " --out " + path("compact.json")).code == 0);
        CHECK(nnrepr("verify --anchors " + path("compact.json") + " --fn eq --n 3").code == 0);
    }

    TEST_CASE("manifests reproduce their reports") {
        auto manifest = file("m1.json", R"({
            "schema_version": "1",
            "command": "construct-verify",
            "spec": {"kind": "COMP", "n": 4},
            "params": {"workers": 4},
            "seed": 0,
            "caps": {"max_arity": 20},
            "outputs": {"anchors": "m1_anchors.json", "report": "m1_report.json"}
        })");
        CHECK(nnrepr("run " + manifest).code == 0);
        auto first = slurp(path("m1_report.json"));
        CHECK(nnrepr("run " + manifest).code == 0);
        CHECK(slurp(path("m1_report.json")) == first);
        CHECK(Json::parse(first)["pass"] == true);
        CHECK_FALSE(Json::parse(first).contains("elapsed_ms"));

        auto suite = file("suite.json", R"({"command":"suite","params":{"family":"elt","count":5,"n":10},"seed":7,
                                           "outputs":{"report":"suite_report.json"}})");
        CHECK(nnrepr("run " + suite).code == 0);
        auto suite_first = slurp(path("suite_report.json"));
        CHECK(Json::parse(suite_first)["instances"].size() == 5);
        CHECK(nnrepr("run " + suite).code == 0);
        CHECK(slurp(path("suite_report.json")) == suite_first);

        file("xor.json", kXor);
        auto failing = file("m2.json", R"({"command":"verify","spec":{"kind":"TABLE","bits":"1001"},
                                          "inputs":{"anchors":"xor.json"},"outputs":{"report":"m2_report.json"}})");
        CHECK(nnrepr("run " + failing).code == 1);
        CHECK(json_file(path("m2_report.json"))["counterexample_count"] == 4);

        auto eqm = file("m3.json", R"({"command":"eqmatrix","params":{"eq_matrix":"dup.txt"}})");
        file("dup.txt", "1 1\n");
        CHECK(nnrepr("run " + eqm).code == 1);

        CHECK(nnrepr("run " + file("m4.json", R"({"command":"teleport"})")).code == 2);
        CHECK(nnrepr("run " + file("m5.json", R"({"command":"construct-verify","spec":{"kind":"EQ","n":12},"caps":{"max_arity":16}})")).code == 3);
    }
}
