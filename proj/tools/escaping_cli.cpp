#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "escaping/errors.hpp"
#include "escaping/hairs.hpp"
#include "escaping/io.hpp"
#include "escaping/lemmas.hpp"
#include "escaping/models.hpp"
#include "escaping/normalization.hpp"
#include "escaping/render.hpp"
#include "escaping/symbolic.hpp"

namespace {

using escaping::io::json;
using namespace escaping;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerdict = 2;

geom::Cplx parse_complex(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw CLI::ValidationError("expected re,im but got \"" + s + "\"");
    try {
        return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError("expected re,im but got \"" + s + "\"");
    }
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open output file " + out_path);
        out << j.dump(2) << "\n";
    }
}

models::LogTransform build_transform(const io::ModelFile& mf, double tolerance,
                                     norm::PostsingularReport* rep_out) {
    auto rep = norm::postsingular_orbit(mf.model, 200, tolerance);
    if (rep_out) *rep_out = rep;
    if (mf.scale_K > 0.0) return models::make_log_transform(mf.model, mf.scale_K);
    return norm::choose_rescaling(mf.model, rep);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Escaping-set toolkit: normalization, addresses, hairs, verification, rendering"};
    app.require_subcommand(1);

    double tolerance = 1e-9;
    int threads = 1;
    std::uint64_t seed_rng = 12345;
    app.add_option("--tolerance", tolerance, "numeric tolerance for settle/certificate checks");
    app.add_option("--threads", threads, "worker threads for rendering");
    app.add_option("--seed", seed_rng, "random seed for sampling campaigns");

    std::string model_path, out_path;

    auto* cmd_norm = app.add_subcommand("normalize", "certify a rescaling of the model");
    cmd_norm->add_option("model", model_path, "model JSON file")->required();
    cmd_norm->add_option("-o,--output", out_path, "output JSON path (default stdout)");

    auto* cmd_addr = app.add_subcommand("address", "external address of an orbit");
    std::string seed_str;
    int horizon = 30;
    bool plane_coords = false;
    cmd_addr->add_option("model", model_path, "model JSON file")->required();
    cmd_addr->add_option("--seed-point", seed_str, "orbit seed as re,im")->required();
    cmd_addr->add_option("--horizon", horizon, "orbit horizon");
    cmd_addr->add_flag("--plane", plane_coords,
                       "seed is a plane coordinate (enables backward extension)");
    cmd_addr->add_option("-o,--output", out_path, "output JSON path (default stdout)");

    auto* cmd_hair = app.add_subcommand("hair", "finite-depth hair approximation");
    int depth = 10;
    double mesh = hairs::kDefaultMesh, truncation = 2000.0;
    std::string csv_prefix;
    std::vector<std::string> addr_tokens;
    cmd_hair->add_option("model", model_path, "model JSON file")->required();
    cmd_hair->add_option("--seed-point", seed_str, "anchor orbit seed as re,im")->required();
    cmd_hair->add_option("--depth", depth, "pullback depth K");
    cmd_hair->add_option("--horizon", horizon, "anchor orbit horizon");
    cmd_hair->add_option("--mesh", mesh, "refinement mesh bound");
    cmd_hair->add_option("--truncation", truncation, "working truncation Re");
    cmd_hair->add_option("--address", addr_tokens,
                         "expected address as base:branch tokens (checked against the orbit)");
    cmd_hair->add_option("--csv-prefix", csv_prefix, "also write each curve as <prefix><j>.csv");
    cmd_hair->add_option("-o,--output", out_path, "output JSON path (default stdout)");

    auto* cmd_verify = app.add_subcommand("verify", "verification campaigns");
    auto* cmd_lemmas = cmd_verify->add_subcommand("lemmas", "randomized tract-lemma campaign");
    int trials = 200;
    cmd_lemmas->add_option("--trials", trials, "number of randomized tracts");
    cmd_lemmas->add_option("-o,--output", out_path, "output JSON path (default stdout)");
    cmd_verify->require_subcommand(1);

    auto* cmd_render = app.add_subcommand("render", "escape-time image (P6)");
    std::string mode_str = "plane", ppm_path = "out.ppm", hair_path, center_str = "0,0";
    int px_w = 400, px_h = 400;
    double width = 8.0, height = 8.0;
    bool force_scalar = false;
    int render_horizon = 60;
    cmd_render->add_option("model", model_path, "model JSON file")->required();
    cmd_render->add_option("-o,--output", ppm_path, "output PPM path");
    cmd_render->add_option("--mode", mode_str, "plane | log | overlay")
        ->check(CLI::IsMember({"plane", "log", "overlay"}));
    cmd_render->add_option("--center", center_str, "window center as re,im");
    cmd_render->add_option("--width", width, "window width");
    cmd_render->add_option("--height", height, "window height");
    cmd_render->add_option("--res-w", px_w, "pixel width");
    cmd_render->add_option("--res-h", px_h, "pixel height");
    cmd_render->add_option("--horizon", render_horizon, "iteration horizon");
    cmd_render->add_option("--hair", hair_path, "hair JSON for overlay mode");
    cmd_render->add_flag("--force-scalar", force_scalar, "disable the SIMD kernel");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_norm) {
            const auto mf = io::load_model_file(model_path);
            norm::PostsingularReport rep;
            models::LogTransform lt;
            try {
                lt = build_transform(mf, tolerance, &rep);
            } catch (const CertificationError& e) {
                emit(json{{"certified", false},
                          {"error", e.what()},
                          {"postsingular", io::postsingular_to_json(rep)}},
                     out_path);
                return kExitVerdict;
            }
            const auto exp_rep = models::certify_expansion(lt, 1000);
            const bool inside = norm::rescaled_postsingular_inside_half_disk(lt, rep);
            const bool w_ok = norm::verify_W_preimage(lt, 500);
            emit(json{{"certified", exp_rep.certified && inside && w_ok && rep.all_converged()},
                      {"transform", io::transform_to_json(lt)},
                      {"postsingular", io::postsingular_to_json(rep)},
                      {"expansion", io::expansion_to_json(exp_rep)},
                      {"rescaled_inside_half_disk", inside},
                      {"tracts_map_into_W", w_ok}},
                 out_path);
            return (exp_rep.certified && inside && w_ok && rep.all_converged()) ? kExitOk
                                                                                : kExitVerdict;
        }

        if (*cmd_addr) {
            const auto mf = io::load_model_file(model_path);
            const auto lt = build_transform(mf, tolerance, nullptr);
            const auto seed = parse_complex(seed_str);
            json out;
            sym::Verdict verdict;
            if (plane_coords) {
                std::vector<geom::Cplx> orbit{seed};
                for (int n = 0; n < horizon; ++n) {
                    const auto r = models::eval_f_rescaled(lt, orbit.back());
                    if (r.escaped_by_overflow) break;
                    orbit.push_back(r.value);
                }
                int k0 = static_cast<int>(orbit.size());
                while (k0 > 0 && models::plane_tract_membership(lt, orbit[k0 - 1])) --k0;
                const auto addr = sym::backward_extend_address(lt, orbit, k0);
                verdict = sym::Verdict::Escaping;
                out = json{{"address", io::address_to_json(addr)},
                           {"k0", k0},
                           {"verdict", io::verdict_name(verdict)}};
            } else {
                const auto rec = sym::track_orbit(lt, seed, horizon);
                verdict = rec.verdict;
                out = json{{"orbit", io::orbit_to_json(rec)},
                           {"verdict", io::verdict_name(rec.verdict)}};
                if (rec.verdict == sym::Verdict::Escaping)
                    out["address"] = io::address_to_json(sym::forward_address(rec));
            }
            emit(out, out_path);
            return verdict == sym::Verdict::Escaping ? kExitOk : kExitVerdict;
        }

        if (*cmd_hair) {
            const auto mf = io::load_model_file(model_path);
            const auto lt = build_transform(mf, tolerance, nullptr);
            const auto seed = parse_complex(seed_str);
            const auto rec = sym::track_orbit(lt, seed, horizon);
            if (rec.verdict != sym::Verdict::Escaping) {
                emit(json{{"verdict", io::verdict_name(rec.verdict)},
                          {"error", "anchor orbit is not escaping"}},
                     out_path);
                return kExitVerdict;
            }
            const auto addr = sym::forward_address(rec);
            if (!addr_tokens.empty()) {
                sym::ExternalAddress expected;
                for (const auto& tok : addr_tokens)
                    expected.labels.push_back(io::parse_label_token(tok));
                expected.horizon = static_cast<int>(expected.labels.size());
                for (std::size_t i = 0;
                     i < expected.labels.size() && i < addr.labels.size(); ++i)
                    if (!(expected.labels[i] == addr.labels[i])) {
                        emit(json{{"error", "address mismatch at index " + std::to_string(i)},
                                  {"orbit_address", io::address_to_json(addr)}},
                             out_path);
                        return kExitVerdict;
                    }
            }
            const auto hair = hairs::build_hair(lt, addr, rec, depth, truncation, mesh);
            const auto audit = hairs::escape_audit(lt, hair, 50, 40);
            json out = io::hair_to_json(hair);
            out["audit"] = json{{"samples", audit.samples},
                                {"escaping", audit.escaping},
                                {"fraction", audit.fraction}};
            if (!csv_prefix.empty())
                for (std::size_t j = 0; j < hair.curves.size(); ++j) {
                    std::ofstream csv(csv_prefix + std::to_string(j) + ".csv");
                    io::write_polyline_csv(hair.curves[j], csv);
                }
            emit(out, out_path);
            return kExitOk;
        }

        if (*cmd_lemmas) {
            const auto rep = lemmas::run_campaign(trials, seed_rng);
            emit(io::campaign_to_json(rep), out_path);
            const bool ok = rep.separation_counterexamples == 0 &&
                            rep.proximity_counterexamples == 0 && rep.control_violated;
            return ok ? kExitOk : kExitVerdict;
        }

        if (*cmd_render) {
            const auto mf = io::load_model_file(model_path);
            const auto lt = build_transform(mf, tolerance, nullptr);
            render::RenderJob job;
            job.transform = lt;
            job.window.center = parse_complex(center_str);
            job.window.width = width;
            job.window.height = height;
            job.px_w = px_w;
            job.px_h = px_h;
            job.horizon = render_horizon;
            job.mode = mode_str == "plane" ? render::RenderMode::PlaneEscapeTime
                       : mode_str == "log" ? render::RenderMode::LogPlaneEscapeTime
                                           : render::RenderMode::HairOverlay;
            render::RenderStats stats;
            render::Image img;
            json extra;
            if (job.mode == render::RenderMode::HairOverlay) {
                if (hair_path.empty())
                    throw std::runtime_error("overlay mode requires --hair <hair.json>");
                std::ifstream hin(hair_path);
                if (!hin) throw std::runtime_error("cannot open hair file " + hair_path);
                const json hj = json::parse(hin);
                hairs::HairApproximation hair;
                for (const auto& c : hj.at("curves"))
                    hair.curves.push_back(io::polyline_from_json(c));
                for (const auto& z : hj.at("anchors"))
                    hair.anchor_orbit.push_back(io::complex_from_json(z));
                if (hj.contains("cut_active"))
                    hair.cut_active = hj["cut_active"].get<std::vector<bool>>();
                if (hj.contains("disk_radius"))
                    hair.disk_radius = hj["disk_radius"].get<double>();
                render::OverlayAudit audit;
                img = render::render_hair_overlay(job, hair, &audit, &stats, force_scalar,
                                                  threads);
                extra["overlay_audit"] = json{{"curve_pixels", audit.curve_pixels},
                                              {"on_escaping", audit.on_escaping},
                                              {"fraction", audit.fraction}};
            } else {
                img = render::render_escape_time(job, &stats, force_scalar, threads);
            }
            render::write_ppm(img, ppm_path);
            json out{{"output", ppm_path},
                     {"kernel", stats.kernel},
                     {"seconds", stats.seconds},
                     {"escaping_fraction", stats.escaping_fraction}};
            for (auto& [k, v] : extra.items()) out[k] = v;
            emit(out, "");
            return kExitOk;
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
