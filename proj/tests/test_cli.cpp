#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gaussmetro/cli/commands.hpp"
#include "gaussmetro/cli/config.hpp"
#include "gaussmetro/cli/figures.hpp"
#include "gaussmetro/cli/table.hpp"
#include "gaussmetro/elements.hpp"
#include "gtest/gtest.h"

using namespace gaussmetro;
using namespace gaussmetro::cli;
using nlohmann::json;

namespace {

const std::string kConfigs = GAUSSMETRO_CONFIGS;

json mzi_doc(double alpha, double xi1 = 1.0, double xi2 = 1.0) {
  return {{"modes", 2},
          {"input", {{"alpha", alpha}, {"r", 0.0}}},
          {"elements", json::array({{{"type", "bs"}},
                                    {{"type", "phase"}, {"value", "PHI"}},
                                    {{"type", "loss"}, {"xi", {xi1, xi2}}},
                                    {{"type", "bs"}}})}};
}

std::string schema_path(const json& doc) {
  try {
    parse_config(doc);
  } catch (const SchemaError& e) {
    return e.path();
  }
  return "<accepted>";
}

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("gaussmetro_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_tool(const std::string& args, const std::filesystem::path& out) {
  const std::string cmd = std::string(GAUSSMETRO_TOOL) + " " + args + " > " + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(FormatNumber, TwelveSignificantDigits) {
  EXPECT_EQ(format_number(4.0), "4");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(2.0 / 3.0 * 1e-7), "6.66666666667e-08");
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(INFINITY), "inf");
  EXPECT_EQ(format_number(-INFINITY), "-inf");
  EXPECT_EQ(round12(1.0 / 3.0), 0.333333333333);
  EXPECT_TRUE(json_number(NAN).is_null());
}

TEST(Table, CsvAndJson) {
  Table t{{"x", "y"}, {{1.0, 0.5}, {2.0, INFINITY}}};
  EXPECT_EQ(t.to_csv(), "x,y\n1,0.5\n2,inf\n");
  const json j = t.to_json();
  EXPECT_EQ(j["rows"][1][1], "inf");
  EXPECT_EQ(t.column("y")[0], 0.5);
  EXPECT_THROW(t.column("z"), std::out_of_range);
}

TEST(Config, ParsesSampleConfigs) {
  for (const char* name : {"mzi_coherent", "mzi_lossy_squeezed", "su11_vacuum", "su11_external_loss", "single_mode_chain"}) {
    const PipelineConfig cfg = parse_config(load_json_file(kConfigs + "/" + name + ".json"));
    EXPECT_GT(cfg.pipeline.elements().size(), 0u) << name;
  }
  const PipelineConfig single = parse_config(load_json_file(kConfigs + "/single_mode_chain.json"));
  EXPECT_EQ(single.pipeline.mode_count(), 1);
  EXPECT_DOUBLE_EQ(single.eval.phi, 0.3);
  EXPECT_EQ(std::get<PhaseShifter>(single.pipeline.elements()[0]).weights, std::vector<double>{-1.0});
  EXPECT_EQ(std::get<Opa>(single.pipeline.elements()[1]).sign, -1);
}

TEST(Config, DefaultsAndOverrides) {
  PipelineConfig cfg = parse_config(mzi_doc(2.0));
  EXPECT_EQ(cfg.eval.phi, 0.0);
  EXPECT_FALSE(cfg.eval.oracle);
  EXPECT_EQ(cfg.eval.dims, 30);
  apply_overrides(cfg, {0.25, true, 40});
  EXPECT_EQ(cfg.eval.phi, 0.25);
  EXPECT_TRUE(cfg.eval.oracle);
  EXPECT_EQ(cfg.eval.dims, 40);
  EXPECT_THROW(apply_overrides(cfg, {std::nullopt, false, 1}), SchemaError);
}

TEST(Config, SchemaErrorsCarryFieldPaths) {
  json doc = mzi_doc(1.0);
  doc["elements"][2]["xi"][0] = "high";
  EXPECT_EQ(schema_path(doc), "elements[2].xi[0]");

  doc = mzi_doc(1.0);
  doc["elements"][2]["xi"] = {1.0};
  EXPECT_EQ(schema_path(doc), "elements[2].xi");

  doc = mzi_doc(1.0);
  doc["elements"][0]["angle"] = 3;
  EXPECT_EQ(schema_path(doc), "elements[0].angle");

  doc = mzi_doc(1.0);
  doc["elements"][3]["type"] = "mirror";
  EXPECT_EQ(schema_path(doc), "elements[3].type");

  doc = mzi_doc(1.0);
  doc["input"].erase("r");
  EXPECT_EQ(schema_path(doc), "input.r");

  doc = mzi_doc(1.0);
  doc["modes"] = 3;
  EXPECT_EQ(schema_path(doc), "modes");

  doc = mzi_doc(1.0);
  doc["eval"] = {{"dims", "many"}};
  EXPECT_EQ(schema_path(doc), "eval.dims");

  doc = mzi_doc(1.0);
  doc["extra"] = true;
  EXPECT_EQ(schema_path(doc), "extra");
}

TEST(Config, ExactlyOneCarrier) {
  json doc = mzi_doc(1.0);
  doc["elements"][1]["value"] = 0.1;
  EXPECT_EQ(schema_path(doc), "elements");
  doc = mzi_doc(1.0);
  doc["elements"].push_back({{"type", "phase"}, {"value", "PHI"}});
  EXPECT_EQ(schema_path(doc), "elements");
}

TEST(Config, BeamSplitterNeedsTwoModes) {
  json doc = {{"modes", 1},
              {"input", {{"alpha", 1.0}, {"r", 0.0}}},
              {"elements", json::array({{{"type", "bs"}}, {{"type", "phase"}, {"value", "PHI"}}})}};
  EXPECT_EQ(schema_path(doc), "elements[0].type");
}

TEST(Config, PhysicsErrors) {
  EXPECT_THROW(parse_config(mzi_doc(1.0, 1.2, 1.0)), PhysicsError);
  json doc = mzi_doc(1.0);
  doc["elements"][0] = {{"type", "opa"}, {"g", -0.5}};
  EXPECT_THROW(parse_config(doc), PhysicsError);
}

TEST(Config, MalformedJsonReportsPosition) {
  try {
    parse_json_text("{\n  \"modes\": 2,\n  \"input\": {\"alpha\": 1,, \"r\": 0}\n}");
    FAIL() << "expected a schema error";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.path(), "line 3, column 24");
  }
}

TEST(Config, FieldPointer) {
  EXPECT_EQ(field_pointer("elements[2].xi[0]").to_string(), "/elements/2/xi/0");
  EXPECT_EQ(field_pointer("input.alpha").to_string(), "/input/alpha");
  EXPECT_EQ(field_pointer("elements.2.g").to_string(), "/elements/2/g");
  EXPECT_THROW(field_pointer("elements[x]"), SchemaError);
  EXPECT_THROW(field_pointer("elements[2"), SchemaError);
  EXPECT_THROW(field_pointer(""), SchemaError);
}

TEST(CmdQfi, IdealMziCoherent) {
  const json out = cmd_qfi(parse_config(mzi_doc(2.0)));
  EXPECT_EQ(out["F"].get<double>(), 4.0);
  EXPECT_EQ(out["qcrb"].get<double>(), 0.5);
  EXPECT_EQ(out["photon_budget"]["input"]["total"].get<double>(), 4.0);
  EXPECT_EQ(out["M_detection"]["A"].size(), 4u);
  EXPECT_EQ(out["M_detection"]["b"].size(), 4u);
  EXPECT_FALSE(out.contains("oracle"));
}

TEST(CmdQfi, Su11Vacuum) {
  const json out = cmd_qfi(parse_config(load_json_file(kConfigs + "/su11_vacuum.json")));
  EXPECT_EQ(out["F"].get<double>(), 3.0);
  EXPECT_NEAR(out["photon_budget"]["at_phase"]["total"].get<double>(), 1.0, 1e-11);
}

TEST(CmdQfi, NoInformationGivesNullBound) {
  const json out = cmd_qfi(parse_config(mzi_doc(0.0)));
  EXPECT_EQ(out["F"].get<double>(), 0.0);
  EXPECT_TRUE(out["qcrb"].is_null());
}

TEST(CmdQfi, OracleBlock) {
  PipelineConfig cfg = parse_config(mzi_doc(1.0, 0.8, 0.8));
  apply_overrides(cfg, {std::nullopt, true, 30});
  const json out = cmd_qfi(cfg);
  EXPECT_NEAR(out["oracle"]["F"].get<double>(), 0.8, 1e-6);
  EXPECT_LT(std::abs(out["oracle"]["relative_deviation"].get<double>()), 1e-6);
  EXPECT_EQ(out["oracle"]["dims"].get<int>(), 30);
}

TEST(CmdSensitivity, DetectorsAndBlindness) {
  const json out = cmd_sensitivity(parse_config(mzi_doc(2.0)));
  ASSERT_EQ(out["detectors"].size(), 4u);
  EXPECT_EQ(out["detectors"][0]["label"], "M");
  EXPECT_NEAR(out["detectors"][0]["d2phi"].get<double>(), 0.25, 1e-11);
  EXPECT_EQ(out["detectors"][1]["label"], "p1");
  EXPECT_TRUE(out["detectors"][1]["blind"].get<bool>());
  EXPECT_TRUE(out["detectors"][1]["d2phi"].is_null());
  EXPECT_NEAR(out["detectors"][2]["d2phi"].get<double>(), 0.25, 1e-11);
  EXPECT_EQ(out["detectors"][3]["label"], "gho");
}

TEST(CmdOracleCheck, Passes) {
  PipelineConfig cfg = parse_config(load_json_file(kConfigs + "/single_mode_chain.json"));
  cfg.eval.dims = 80;
  const json out = cmd_oracle_check(cfg);
  EXPECT_TRUE(out["pass"].get<bool>());
  EXPECT_EQ(out["checks"][0]["quantity"], "F");
}

TEST(CmdSweep, TransmissivityScalesFisher) {
  AxisSpec axis{{"elements[2].xi[0]", "elements[2].xi[1]"}, 0.0, 1.0, 11, false};
  const Table t = cmd_sweep(mzi_doc(2.0), axis);
  ASSERT_EQ(t.rows.size(), 11u);
  EXPECT_EQ(t.columns[0], "elements[2].xi[0]+elements[2].xi[1]");
  const auto xi = t.column(t.columns[0]);
  const auto f = t.column("F");
  for (std::size_t i = 0; i < xi.size(); ++i) EXPECT_NEAR(f[i], 4.0 * xi[i], 1e-12);
  EXPECT_TRUE(std::isinf(t.column("dphi")[0]));
  EXPECT_TRUE(std::isinf(t.column("dphi_p1")[5]));
}

TEST(CmdSweep, SinglePointEqualsQfi) {
  const json doc = load_json_file(kConfigs + "/mzi_lossy_squeezed.json");
  const Table t = cmd_sweep(doc, {{"input.alpha"}, 1.0, 1.0, 1, false});
  const json q = cmd_qfi(parse_config(doc));
  EXPECT_EQ(round12(t.column("F")[0]), q["F"].get<double>());
  EXPECT_EQ(round12(t.column("dphi")[0]), q["qcrb"].get<double>());
}

TEST(CmdSweep, GainPseudoField) {
  const json doc = load_json_file(kConfigs + "/single_mode_chain.json");
  const Table t = cmd_sweep(doc, {{"elements[1].G"}, 0.0, 15.0, 4, false});
  // Unit transmissivity would make F independent of G; with loss it is not.
  EXPECT_EQ(t.columns[0], "elements[1].G");
  EXPECT_NE(t.column("F")[0], t.column("F")[3]);
  const json doc_ideal = [&] {
    json d = doc;
    d["elements"][2]["xi"] = {1.0};
    return d;
  }();
  const auto f = cmd_sweep(doc_ideal, {{"elements[1].G"}, 0.0, 15.0, 4, false}).column("F");
  for (double x : f) EXPECT_NEAR(x, f[0], 1e-9 * f[0]);
}

TEST(CmdSweep, Errors) {
  EXPECT_THROW(cmd_sweep(mzi_doc(1.0), {{"elements[9].xi[0]"}, 0.0, 1.0, 3, false}), SchemaError);
  EXPECT_THROW(cmd_sweep(mzi_doc(1.0), {{"elements[0].type"}, 0.0, 1.0, 3, false}), SchemaError);
  EXPECT_THROW(split_paths("a,,b"), SchemaError);
  EXPECT_EQ(split_paths("a.b,c[1]"), (std::vector<std::string>{"a.b", "c[1]"}));
}

TEST(FlattenCsv, ScalarsOnly) {
  const json doc = {{"F", 4.0}, {"v", {1.0, nullptr}}, {"ok", true}, {"name", "M"}};
  EXPECT_EQ(flatten_to_csv(doc), "field,value\nF,4\nname,M\nok,true\nv[0],1\nv[1],\n");
}

TEST(Figures, ByteIdenticalAcrossRuns) {
  const auto a = temp_dir("fig_a");
  const auto b = temp_dir("fig_b");
  const auto written = cmd_figure("all", a, true);
  cmd_figure("all", b, true);
  EXPECT_EQ(written.size(), 12u);
  for (const auto& name : figure_names()) {
    EXPECT_EQ(read_file(a / (name + ".csv")), read_file(b / (name + ".csv"))) << name;
    EXPECT_EQ(read_file(a / (name + ".svg")), read_file(b / (name + ".svg"))) << name;
  }
  EXPECT_THROW(cmd_figure("fig9", a), SchemaError);
}

TEST(Figures, Fig2bMDetectionBeatsP2) {
  const Figure f = make_figure("fig2b");
  const auto m = f.table.column("dphi_M");
  const auto p2 = f.table.column("dphi_p2");
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_LT(m[i], p2[i]);
}

TEST(Figures, Fig3Ordering) {
  for (const char* name : {"fig3a", "fig3b"}) {
    const Figure f = make_figure(name);
    const auto cs = f.table.column("dphi_su11_cs");
    const auto coh = f.table.column("dphi_su11_coherent");
    const auto mzi = f.table.column("dphi_mzi_coherent");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      EXPECT_LT(cs[i], coh[i]) << name;
      EXPECT_LT(coh[i], mzi[i]) << name;
    }
  }
}

TEST(Figures, Fig4aSecondAmplifierHelps) {
  const Figure f = make_figure("fig4a");
  const auto ideal = f.table.column("dphi_ideal");
  const auto with = f.table.column("dphi_opa2");
  const auto without = f.table.column("dphi_no_opa2");
  const auto formula = f.table.column("dphi_opa2_formula");
  for (std::size_t i = 0; i < ideal.size(); ++i) {
    EXPECT_LT(ideal[i], with[i]);
    EXPECT_LT(with[i], without[i]);
    EXPECT_NEAR(with[i], formula[i], 1e-9 * with[i]);
  }
}

TEST(Tool, ExitCodes) {
  const auto dir = temp_dir("tool");
  const auto out = dir / "out.txt";
  EXPECT_EQ(run_tool("qfi --config " + kConfigs + "/mzi_coherent.json", out), 0);
  EXPECT_EQ(json::parse(read_file(out))["F"].get<double>(), 4.0);

  std::ofstream(dir / "broken.json") << "{\"modes\": 2,, }";
  EXPECT_EQ(run_tool("qfi --config " + (dir / "broken.json").string(), out), 2);
  EXPECT_NE(read_file(out).find("line 1, column 13"), std::string::npos);

  json bad = mzi_doc(1.0);
  bad["elements"][2]["xi"][1] = "x";
  std::ofstream(dir / "schema.json") << bad.dump();
  EXPECT_EQ(run_tool("qfi --config " + (dir / "schema.json").string(), out), 2);
  EXPECT_NE(read_file(out).find("elements[2].xi[1]"), std::string::npos);

  std::ofstream(dir / "physics.json") << mzi_doc(1.0, 1.5, 1.0).dump();
  EXPECT_EQ(run_tool("qfi --config " + (dir / "physics.json").string(), out), 3);

  EXPECT_EQ(run_tool("qfi --oracle --dims 6 --config " + kConfigs + "/su11_external_loss.json", out), 4);
  EXPECT_EQ(run_tool("qfi", out), 2);
  EXPECT_EQ(run_tool("figure fig9 --out " + dir.string(), out), 2);
  EXPECT_EQ(run_tool("sweep --config " + kConfigs + "/mzi_coherent.json --axis nothing --lo 0 --hi 1 --points 3", out), 2);
}

TEST(Tool, SweepCsvAndFigure) {
  const auto dir = temp_dir("tool_sweep");
  const auto out = dir / "sweep.csv";
  ASSERT_EQ(run_tool("sweep --config " + kConfigs +
                         "/mzi_coherent.json --axis 'elements[2].xi[0],elements[2].xi[1]' --lo 0 --hi 1 --points 3",
                     out),
            0);
  EXPECT_EQ(read_file(out).substr(0, read_file(out).find('\n')),
            "elements[2].xi[0]+elements[2].xi[1],F,dphi,dphi_M,dphi_p1,dphi_p2,dphi_gho");
  ASSERT_EQ(run_tool("figure fig2b --out " + dir.string(), dir / "log.txt"), 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "fig2b.csv"));
  EXPECT_FALSE(std::filesystem::exists(dir / "fig2b.svg"));
}
