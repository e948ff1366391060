#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "saldet/error.hpp"
#include "saldet/model_io.hpp"
#include "saldet/pipeline.hpp"

namespace {

int dispatch(const std::function<int()>& body) {
  try {
    return body();
  } catch (const saldet::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return static_cast<int>(saldet::ExitCode::internal);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"salient-object detection toolkit: LBP + spatial-histogram features with a grid CRF"};
  app.require_subcommand(1);

  std::string config_path, data_dir, model_out;
  auto* train = app.add_subcommand("train", "fit the feature models and CRF weights");
  train->add_option("--config", config_path, "pipeline config file")->required();
  train->add_option("--data", data_dir, "dataset root (img/ and gt/, or manifest.tsv)")->required();
  train->add_option("--out", model_out, "output model file")->required();

  std::string model_path, image_path, mask_out, soft_out;
  auto* predict = app.add_subcommand("predict", "decode a saliency mask for one image");
  predict->add_option("--model", model_path, "trained model file")->required();
  predict->add_option("--image", image_path, "input image (PNG or JPEG)")->required();
  predict->add_option("--out", mask_out, "output binary mask PNG")->required();
  predict->add_option("--soft", soft_out, "optional marginal map PNG");

  std::string pred_dir, gt_dir, report_path;
  double beta2 = 0.3;
  bool ignore_unmatched = false;
  auto* eval = app.add_subcommand("eval", "score predicted masks against ground truth");
  eval->add_option("--pred", pred_dir, "directory of predicted masks")->required();
  eval->add_option("--gt", gt_dir, "directory of ground-truth masks")->required();
  eval->add_option("--beta2", beta2, "F-measure beta^2 (default 0.3)");
  eval->add_option("--report", report_path, "write a JSON report here");
  eval->add_flag("--ignore-unmatched", ignore_unmatched, "do not fail on unmatched stems");

  std::string feat_config, feat_image, feat_out, feat_model;
  auto* features = app.add_subcommand("features", "dump per-particle features as JSON lines");
  features->add_option("--config", feat_config, "pipeline config file")->required();
  features->add_option("--image", feat_image, "input image")->required();
  features->add_option("--out", feat_out, "output JSONL file")->required();
  features->add_option("--model", feat_model, "optional model for distances and integration");

  CLI11_PARSE(app, argc, argv);

  if (train->parsed()) {
    return dispatch([&] {
      const auto cfg = saldet::load_config(config_path);
      const auto result = saldet::run_train(cfg, data_dir, std::cout);
      saldet::save_model(result.model, model_out);
      std::cout << "model written to " << model_out << "\n";
      return 0;
    });
  }
  if (predict->parsed()) {
    return dispatch([&] {
      const auto model = saldet::load_model(model_path);
      std::optional<std::filesystem::path> soft;
      if (!soft_out.empty()) soft = soft_out;
      saldet::run_predict(model, image_path, mask_out, soft);
      return 0;
    });
  }
  if (eval->parsed()) {
    return dispatch([&] {
      const auto result = saldet::run_eval(pred_dir, gt_dir, beta2);
      saldet::write_report_text(result.report, std::cout);
      if (!report_path.empty()) saldet::write_report_json(result.report, report_path);
      if (!result.unmatched.empty()) {
        std::cerr << result.unmatched.size() << " unmatched stem(s):\n";
        for (const auto& stem : result.unmatched) std::cerr << "  " << stem << "\n";
        if (!ignore_unmatched) return static_cast<int>(saldet::ExitCode::dataset);
      }
      return 0;
    });
  }
  // features
  return dispatch([&] {
    const auto cfg = saldet::load_config(feat_config);
    std::optional<saldet::ModelFile> model;
    if (!feat_model.empty()) model = saldet::load_model(feat_model);
    saldet::run_features(cfg, feat_image, feat_out, model ? &*model : nullptr);
    return 0;
  });
}
