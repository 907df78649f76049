#include "coarse/io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string stdout_text;
};

const char* cli_binary() { return std::getenv("COARSEKIT_BIN"); }

CliResult run_cli(const std::string& args, const fs::path& dir) {
  const fs::path out = dir / "stdout.txt";
  const std::string cmd = std::string(cli_binary()) + " " + args + " > " +
                          out.string() + " 2> " + (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  CliResult res;
  res.exit_code = WEXITSTATUS(status);
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  res.stdout_text = ss.str();
  return res;
}

fs::path make_temp_dir() {
  auto dir = fs::temp_directory_path() /
             ("coarsekit-test-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

const std::string kPathSpace =
    "{\"points\":[\"p0\",\"p1\",\"p2\",\"p3\"],"
    "\"dist\":[[0,1,2,3],[1,0,1,2],[2,1,0,1],[3,2,1,0]],\"scale\":1}";

const std::string kBadSpace =
    "{\"points\":[\"a\",\"b\",\"c\"],"
    "\"dist\":[[0,1,5],[1,0,1],[5,1,0]],\"scale\":1}";

const std::string kTwoPoint =
    "{\"points\":[\"a\",\"b\"],\"dist\":[[0,1],[1,0]],\"scale\":1}";

}  // namespace

TEST_CASE("command line surface") {
  if (!cli_binary()) {
    MESSAGE("COARSEKIT_BIN not set; skipping CLI tests");
    return;
  }
  const auto dir = make_temp_dir();
  write_file(dir / "x4.json", kPathSpace);
  write_file(dir / "bad.json", kBadSpace);
  write_file(dir / "two.json", kTwoPoint);

  SUBCASE("space validate accepts a valid document") {
    const auto res = run_cli("space validate --space " + (dir / "x4.json").string(), dir);
    CHECK(res.exit_code == 0);
    CHECK(res.stdout_text.find("\"space valid\"") != std::string::npos);
  }

  SUBCASE("malformed documents exit 2") {
    const auto res = run_cli("space validate --space " + (dir / "bad.json").string(), dir);
    CHECK(res.exit_code == 2);
  }

  SUBCASE("unknown subcommands exit 2") {
    const auto res = run_cli("frobnicate", dir);
    CHECK(res.exit_code == 2);
  }

  SUBCASE("atlas build then verify round-trips through files") {
    const auto atlas_path = (dir / "atlas.json").string();
    const auto build = run_cli("--out " + atlas_path +
                                   " atlas build --method coloring --space " +
                                   (dir / "x4.json").string() + " --R 1,2",
                               dir);
    CHECK(build.exit_code == 0);
    const auto verify = run_cli("atlas verify --space " + (dir / "x4.json").string() +
                                    " --atlas " + atlas_path,
                                dir);
    CHECK(verify.exit_code == 0);
    CHECK(verify.stdout_text.find("axiom1") != std::string::npos);
  }

  SUBCASE("broken atlases fail verification with exit 1") {
    // A diagonal-only chart at radius 2 misses every adjacent pair.
    write_file(dir / "broken.json",
               "[{\"R\":2,\"translations\":[[[0,0],[1,1],[2,2],[3,3]]],"
               "\"cotranslations\":[[[0,0],[1,1],[2,2],[3,3]]]}]");
    const auto res = run_cli("atlas verify --space " + (dir / "x4.json").string() +
                                 " --atlas " + (dir / "broken.json").string(),
                             dir);
    CHECK(res.exit_code == 1);
  }

  SUBCASE("kappa exact on the two-point space") {
    const auto res = run_cli(
        "kappa --space " + (dir / "two.json").string() + " --R 2 --exact", dir);
    CHECK(res.exit_code == 0);
    CHECK(res.stdout_text.find("\"kappa\": 1") != std::string::npos);
  }

  SUBCASE("certificate pipeline through files") {
    const auto cert_path = (dir / "ball.json").string();
    const auto ball = run_cli("--out " + cert_path + " propa ball-cert --space " +
                                  (dir / "x4.json").string() + " --S 1 --R 1",
                              dir);
    CHECK(ball.exit_code == 0);
    const auto verify = run_cli("propa verify --space " + (dir / "x4.json").string() +
                                    " --cert " + cert_path,
                                dir);
    CHECK(verify.exit_code == 0);

    const auto kernel_path = (dir / "kernel-cert.json").string();
    const auto conv = run_cli("--out " + kernel_path + " propa convert --space " +
                                  (dir / "x4.json").string() +
                                  " --from l2 --to kernel-real --in " + cert_path,
                              dir);
    CHECK(conv.exit_code == 0);
    CHECK(conv.stdout_text.find("norm identity") != std::string::npos);

    const auto roe_path = (dir / "kernel-roe.json").string();
    CHECK(run_cli("--out " + roe_path + " propa convert --space " +
                      (dir / "x4.json").string() +
                      " --from kernel-real --to kernel-roe --in " + kernel_path,
                  dir)
              .exit_code == 0);
    const auto back = run_cli("--out " + (dir / "l2back.json").string() +
                                  " propa convert --space " +
                                  (dir / "x4.json").string() +
                                  " --from kernel-roe --to l2 --in " + roe_path +
                                  " --S 3",
                              dir);
    CHECK(back.exit_code == 0);
    CHECK(back.stdout_text.find("output verifies") != std::string::npos);
  }

  SUBCASE("reports are byte-identical across runs") {
    const std::string cmd = "telescope check --space " + (dir / "x4.json").string() +
                            " --R 1 --seed 42";
    const auto a = run_cli(cmd, dir);
    const auto b = run_cli(cmd, dir);
    CHECK(a.exit_code == 0);
    CHECK(a.stdout_text == b.stdout_text);
    CHECK(!a.stdout_text.empty());
  }

  SUBCASE("gammau emits a space document") {
    const auto out = (dir / "gamma.json").string();
    const auto res = run_cli("--out " + out + " gammau --nmax 3", dir);
    CHECK(res.exit_code == 0);
    CHECK(res.stdout_text.find("\"components\": 4") != std::string::npos);
    CHECK_NOTHROW(coarse::io::load_space(coarse::io::read_json_file(out)));
  }

  SUBCASE("group to canonical atlas to algebra dimension") {
    write_file(dir / "z5.json", coarse::io::save_group(coarse::make_cyclic_group(5)).dump());
    const auto wspace = (dir / "z5-space.json").string();
    CHECK(run_cli("--out " + wspace + " group metric --group " +
                      (dir / "z5.json").string(),
                  dir)
              .exit_code == 0);
    const auto atlas = (dir / "z5-atlas.json").string();
    const auto build = run_cli("--out " + atlas +
                                   " atlas build --method canonical --group " +
                                   (dir / "z5.json").string() + " --R 3",
                               dir);
    CHECK(build.exit_code == 0);
    const auto verify = run_cli("atlas verify --space " + wspace + " --atlas " + atlas, dir);
    CHECK(verify.exit_code == 0);
    CHECK(verify.stdout_text.find("\"R=3 free\": \"true\"") != std::string::npos);

    const auto dim =
        run_cli("roe algebra-dim --space " + wspace + " --atlas " + atlas, dir);
    CHECK(dim.exit_code == 0);
    CHECK(dim.stdout_text.find("\"dimension\": 5") != std::string::npos);

    const auto claim = run_cli(
        "roe claim --space " + wspace + " --atlas " + atlas + " --R 3", dir);
    CHECK(claim.exit_code == 0);
  }

  SUBCASE("pullback atlas from a map document") {
    write_file(dir / "z8.json", coarse::io::save_group(coarse::make_cyclic_group(8)).dump());
    write_file(dir / "embed.json",
               "{\"domain\":[\"p0\",\"p1\",\"p2\",\"p3\"],"
               "\"values\":[\"0\",\"1\",\"2\",\"3\"]}");
    const auto atlas = (dir / "pullback.json").string();
    const auto build = run_cli(
        "--out " + atlas + " atlas build --method pullback --space " +
            (dir / "x4.json").string() + " --group " + (dir / "z8.json").string() +
            " --map " + (dir / "embed.json").string() + " --R 1,2",
        dir);
    CHECK(build.exit_code == 0);
    CHECK(build.stdout_text.find("\"R=1 free\": \"true\"") != std::string::npos);
    CHECK(build.stdout_text.find("\"R=2 globally_controlled\": \"true\"") !=
          std::string::npos);
  }

  SUBCASE("limit-embed flags stabilization") {
    write_file(dir / "z7.json", coarse::io::save_group(coarse::make_cyclic_group(7)).dump());
    write_file(dir / "family.json",
               "{\"maps\":[{\"domain\":[\"p0\",\"p1\"],\"values\":[\"1\",\"2\"]},"
               "{\"domain\":[\"p0\",\"p1\",\"p2\",\"p3\"],"
               "\"values\":[\"1\",\"2\",\"4\",\"5\"]},"
               "{\"domain\":[\"p0\",\"p1\",\"p2\",\"p3\"],"
               "\"values\":[\"1\",\"2\",\"4\",\"5\"]}]}");
    const auto ok = run_cli("limit-embed --space " + (dir / "x4.json").string() +
                                " --group " + (dir / "z7.json").string() +
                                " --family " + (dir / "family.json").string(),
                            dir);
    CHECK(ok.exit_code == 0);
    CHECK(ok.stdout_text.find("cocycle identities") != std::string::npos);

    write_file(dir / "flip.json",
               "{\"maps\":[{\"domain\":[\"p0\",\"p1\"],\"values\":[\"1\",\"2\"]},"
               "{\"domain\":[\"p0\",\"p1\",\"p2\",\"p3\"],"
               "\"values\":[\"1\",\"2\",\"4\",\"5\"]},"
               "{\"domain\":[\"p0\",\"p1\",\"p2\",\"p3\"],"
               "\"values\":[\"1\",\"3\",\"4\",\"5\"]}]}");
    const auto bad = run_cli("limit-embed --space " + (dir / "x4.json").string() +
                                 " --group " + (dir / "z7.json").string() +
                                 " --family " + (dir / "flip.json").string(),
                             dir);
    CHECK(bad.exit_code == 1);
    CHECK(bad.stdout_text.find("does not stabilize") != std::string::npos);
  }

  SUBCASE("morita subcommands run end to end") {
    write_file(dir / "collapse.json",
               "{\"domain\":[\"p0\",\"p1\",\"p2\",\"p3\"],"
               "\"values\":[\"q0\",\"q0\",\"q1\",\"q1\"]}");
    write_file(dir / "y2.json",
               "{\"points\":[\"q0\",\"q1\"],\"dist\":[[0,1],[1,0]],\"scale\":1}");
    const auto inter = run_cli("morita interleave --space " + (dir / "x4.json").string() +
                                   " --target " + (dir / "y2.json").string() +
                                   " --map " + (dir / "collapse.json").string() +
                                   " --J 4",
                               dir);
    CHECK(inter.exit_code == 0);
    CHECK(inter.stdout_text.find("residue image exact") != std::string::npos);

    write_file(dir / "ident4.json",
               coarse::io::save_kernel(coarse::Kernel::Identity(4, 4), "x4").dump());
    const auto conj = run_cli("morita conjugate --space " + (dir / "x4.json").string() +
                                  " --target " + (dir / "y2.json").string() +
                                  " --map " + (dir / "collapse.json").string() +
                                  " --kernel " + (dir / "ident4.json").string() +
                                  " --n 2 --i 1 --np 2 --ip 1",
                              dir);
    CHECK(conj.exit_code == 0);
    CHECK(conj.stdout_text.find("propagation within bound") != std::string::npos);
  }

  SUBCASE("glue runs from a blocks document") {
    write_file(dir / "blocks.json",
               "{\"R\":2,\"eps\":0.5,\"blocks\":["
               "{\"offset\":0,\"space\":" + kTwoPoint +
                   ",\"kernel\":{\"entries\":[[1,0.99],[0.99,1]]}},"
                   "{\"offset\":30,\"space\":{\"points\":[\"c\"],"
                   "\"dist\":[[0]],\"scale\":1},\"kernel\":{\"entries\":[[1]]}}]}");
    const auto res = run_cli("glue --blocks " + (dir / "blocks.json").string(), dir);
    CHECK(res.exit_code == 0);
    CHECK(res.stdout_text.find("\"fused_blocks\": 0") != std::string::npos);
  }

  fs::remove_all(dir);
}
