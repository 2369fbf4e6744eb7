// include/s2sae/model_spec.hpp

#ifndef S2SAE_MODEL_SPEC_HPP
#define S2SAE_MODEL_SPEC_HPP

#include <string>

#include <json.hpp>

#include "s2sae/cells.hpp"
#include "s2sae/errors.hpp"

namespace s2sae {

// Architecture description for both autoencoder families. Serialised as
// canonical JSON (sorted keys, no whitespace) inside checkpoints.
struct ModelSpec {
  CellType cell = CellType::Gru;
  int enc_layers = 2;
  int dec_layers = 2;
  int units = 256;
  bool enc_bidirectional = true;
  bool dec_bidirectional = false;
  int n_mels = 128;
  bool attention = false;
  int alignment_units = 0;  // 0 means "same as units"; attention only

  int enc_dirs() const { return enc_bidirectional ? 2 : 1; }
  int dec_dirs() const { return dec_bidirectional ? 2 : 1; }

  // Per-step width of the top encoder layer (what attention attends over).
  int enc_state_dim() const { return enc_dirs() * units; }

  // Concatenation of all final encoder hidden states.
  int final_concat_dim() const { return enc_layers * enc_dirs() * units; }

  // Non-attention context / feature width. Sized from the encoder layer
  // count with both directions counted regardless of the actual encoder or
  // decoder direction, so every 2-layer 256-unit variant reports 1024.
  int context_dim() const { return enc_layers * 2 * units; }

  int alignment_dim() const { return alignment_units > 0 ? alignment_units : units; }

  void validate() const {
    if (units < 1) throw InvalidArgument("model spec: units must be >= 1");
    if (enc_layers < 1 || enc_layers > 2 || dec_layers < 1 || dec_layers > 2)
      throw InvalidArgument("model spec: layer counts must be 1 or 2");
    if (n_mels < 1) throw InvalidArgument("model spec: n_mels must be >= 1");
    if (attention && dec_bidirectional)
      throw InvalidArgument("model spec: attention requires a unidirectional decoder");
    if (!attention && alignment_units > 0)
      throw InvalidArgument("model spec: alignment units only apply with attention");
    if (alignment_units < 0) throw InvalidArgument("model spec: negative alignment units");
  }

  nlohmann::json to_json() const {
    return nlohmann::json{{"alignment_units", alignment_dim_or_zero()},
                          {"attention", attention},
                          {"cell", cell_name(cell)},
                          {"dec_bidirectional", dec_bidirectional},
                          {"dec_layers", dec_layers},
                          {"enc_bidirectional", enc_bidirectional},
                          {"enc_layers", enc_layers},
                          {"n_mels", n_mels},
                          {"units", units}};
  }

  std::string canonical_json() const { return to_json().dump(); }

  static ModelSpec from_json(const nlohmann::json& j) {
    ModelSpec s;
    const std::string cell = j.at("cell").get<std::string>();
    if (cell == "gru") s.cell = CellType::Gru;
    else if (cell == "lstm") s.cell = CellType::Lstm;
    else throw InvalidInput("model spec: unknown cell type '" + cell + "'");
    s.enc_layers = j.at("enc_layers").get<int>();
    s.dec_layers = j.at("dec_layers").get<int>();
    s.units = j.at("units").get<int>();
    s.enc_bidirectional = j.at("enc_bidirectional").get<bool>();
    s.dec_bidirectional = j.at("dec_bidirectional").get<bool>();
    s.n_mels = j.at("n_mels").get<int>();
    s.attention = j.at("attention").get<bool>();
    s.alignment_units = j.at("alignment_units").get<int>();
    s.validate();
    return s;
  }

 private:
  int alignment_dim_or_zero() const { return attention ? alignment_dim() : 0; }
};

}  // namespace s2sae

#endif  // S2SAE_MODEL_SPEC_HPP
