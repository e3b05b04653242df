// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

// Runs the lawa executable as a subprocess and checks exit codes and outputs.

#include <sys/wait.h>

#include <cstdlib>

#include "catch_amalgamated.hpp"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::string out;
    std::string err;
};

Run lawa_cli(const std::string& args, const fs::path& dir) {
    const auto out = dir / "stdout.txt";
    const auto err = dir / "stderr.txt";
    const std::string cmd = std::string("\"") + LAWA_CLI_PATH + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                            err.string() + "\"";
    const int raw = std::system(cmd.c_str());
    Run r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = lawa_test::slurp(out);
    r.err = lawa_test::slurp(err);
    return r;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

const std::string kSmall = "--n-per-class 60 --hidden 8 --batch-size 16 --record-wall-time false ";

}  // namespace

TEST_CASE("train writes one metrics row per epoch") {
    const auto dir = lawa_test::scratch_dir("cli_train");
    const auto run = dir / "run1";
    const auto r = lawa_cli("train --dataset spirals --epochs 50 --scheme uniform --k 6 --optimizer sgd --lr 0.1 "
                            "--momentum 0.9 --schedule cosine --seed 1 --out " + q(run),
                            dir);
    REQUIRE(r.status == 0);
    const auto csv = lawa_test::read_csv(run / "metrics.csv");
    CHECK(csv.rows.size() == 50);
    CHECK(lawa_test::slurp(run / "metrics.csv").rfind(
              "epoch,step,lr,train_loss,train_acc,val_loss,val_acc,avg_val_loss,avg_val_acc,wall_seconds\n", 0) == 0);
    const auto resolved = lawa_test::slurp(run / "config.resolved");
    CHECK(resolved.find("epochs=50\n") != std::string::npos);
    CHECK(resolved.find("momentum=0.9\n") != std::string::npos);
    CHECK(fs::exists(run / "ckpt_e00049.lawa"));
}

TEST_CASE("invalid window exits with status 2") {
    const auto dir = lawa_test::scratch_dir("cli_k0");
    const auto r = lawa_cli("train --scheme uniform --k 0 --out " + q(dir / "run"), dir);
    CHECK(r.status == 2);
    CHECK(r.err.find("k >= 1") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "run" / "metrics.csv"));
}

TEST_CASE("large window warns and proceeds") {
    const auto dir = lawa_test::scratch_dir("cli_k20");
    const auto r = lawa_cli("train " + kSmall + "--epochs 2 --k 20 --out " + q(dir / "run"), dir);
    CHECK(r.status == 0);
    CHECK(r.err.find("k>16") != std::string::npos);
    CHECK(lawa_test::read_csv(dir / "run" / "metrics.csv").rows.size() == 2);
}

TEST_CASE("explicit flags override the config file") {
    const auto dir = lawa_test::scratch_dir("cli_config");
    lawa_test::spit(dir / "run.cfg", "epochs=4\nlr=0.05\nhidden=8\nn_per_class=60\nbatch_size=16\n");
    const auto r = lawa_cli("train --config " + q(dir / "run.cfg") + " --epochs 3 --out " + q(dir / "run"), dir);
    REQUIRE(r.status == 0);
    const auto resolved = lawa_test::slurp(dir / "run" / "config.resolved");
    CHECK(resolved.find("epochs=3\n") != std::string::npos);
    CHECK(resolved.find("lr=0.05\n") != std::string::npos);

    CHECK(lawa_cli("train --config " + q(dir / "missing.cfg"), dir).status == 2);
    lawa_test::spit(dir / "bad.cfg", "colour=blue\n");
    CHECK(lawa_cli("train --config " + q(dir / "bad.cfg"), dir).status == 2);
}

TEST_CASE("usage errors exit with status 2") {
    const auto dir = lawa_test::scratch_dir("cli_usage");
    CHECK(lawa_cli("", dir).status == 2);
    CHECK(lawa_cli("train --no-such-flag 1", dir).status == 2);
    CHECK(lawa_cli("average --k 3", dir).status == 2);
    CHECK(lawa_cli("train --optimizer rmsprop", dir).status == 2);
    CHECK(lawa_cli("--help", dir).status == 0);
}

TEST_CASE("divergence exits with status 1") {
    const auto dir = lawa_test::scratch_dir("cli_nan");
    const auto r = lawa_cli("train " + kSmall + "--epochs 2 --lr 1e300 --out " + q(dir / "run"), dir);
    CHECK(r.status == 1);
    CHECK(r.err.find("epoch 0") != std::string::npos);
}

TEST_CASE("average, eval and compare on a finished run") {
    const auto dir = lawa_test::scratch_dir("cli_pipeline");
    const auto run = dir / "run";
    REQUIRE(lawa_cli("train " + kSmall + "--epochs 8 --k 3 --out " + q(run), dir).status == 0);

    REQUIRE(lawa_cli("average --dir " + q(run) + " --k 3 --out " + q(dir / "avg.lawa"), dir).status == 0);
    CHECK(fs::exists(dir / "avg.lawa"));
    const auto few = lawa_cli("average --dir " + q(run) + " --k 30 --out " + q(dir / "x.lawa"), dir);
    CHECK(few.status == 2);
    CHECK(few.err.find("need k=30") != std::string::npos);

    const std::string model = "--config " + q(run / "config.resolved") + " ";
    const auto off = lawa_cli("eval " + model + "--checkpoint " + q(run / "ckpt_e00007.lawa"), dir);
    REQUIRE(off.status == 0);
    CHECK(off.out.find("loss=") == 0);
    CHECK(off.out.find("accuracy=") != std::string::npos);
    const auto copy = lawa_cli("eval " + model + "--bn-mode copy --checkpoint " + q(run / "ckpt_e00007.lawa"), dir);
    CHECK(copy.out == off.out);
    const auto rec = lawa_cli("eval " + model + "--bn-mode recompute --checkpoint " + q(run / "ckpt_e00007.lawa"), dir);
    CHECK(rec.status == 2);
    const auto rec_ok = lawa_cli(
        "eval " + model + "--bn-mode recompute --train-data config --checkpoint " + q(run / "ckpt_e00007.lawa"), dir);
    CHECK(rec_ok.out == off.out);
    const auto wrong = lawa_cli("eval " + model + "--hidden 9 --checkpoint " + q(run / "ckpt_e00007.lawa"), dir);
    CHECK(wrong.status == 2);

    const auto cmp = lawa_cli("compare " + q(run / "metrics.csv") + " " + q(run / "metrics.csv") +
                                  " --targets 0.5,0.4 --early-epochs 3 --out " + q(dir / "cmp.csv"),
                              dir);
    REQUIRE(cmp.status == 0);
    CHECK(cmp.out.find("max_savings=") != std::string::npos);
    CHECK(lawa_test::read_csv(dir / "cmp.csv").rows.size() == 16);
    CHECK(fs::exists(dir / "cmp_summary.csv"));
    CHECK(fs::exists(dir / "cmp_targets.csv"));
    CHECK(lawa_cli("compare " + q(run / "metrics.csv") + " --metric top5 --out " + q(dir / "c2.csv"), dir).status ==
          2);
}

TEST_CASE("scheme comparison and k sweep commands") {
    const auto dir = lawa_test::scratch_dir("cli_harness");
    const auto r = lawa_cli("compare-schemes " + kSmall + "--epochs 4 --out " + q(dir / "schemes"), dir);
    REQUIRE(r.status == 0);
    const auto csv = lawa_test::read_csv(dir / "schemes" / "schemes.csv");
    CHECK(csv.rows.size() == 4);
    CHECK(csv.col("uniform_avg_val_loss") != csv.col("ema_avg_val_loss"));

    const auto s = lawa_cli("sweep-k " + kSmall + "--epochs 3 --ks 1,2 --out " + q(dir / "sweep"), dir);
    REQUIRE(s.status == 0);
    CHECK(lawa_test::read_csv(dir / "sweep" / "k_sweep.csv").rows.size() == 3);
}
