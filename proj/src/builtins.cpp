#include "repnet/builtins.hpp"

#include <stdexcept>

namespace repnet {

namespace {

using namespace expr;

Presentation braid_presentation() {
  Presentation p;
  p.name = "braid";
  p.kind = StructureKind::group;
  p.generators.push_back({"f", 2, 2, true, "g"});

  // Inverse pair on two blocks, then the three-block braid move. The
  // far-commutation relation holds automatically for placed generators and is
  // never trained.
  p.relations.push_back({"f∘g=id", compose(gen("f"), inv("f")), id(2)});
  p.relations.push_back({"g∘f=id", compose(inv("f"), gen("f")), id(2)});
  RelExprPtr f1 = product(gen("f"), id(1));
  RelExprPtr f2 = product(id(1), gen("f"));
  p.relations.push_back({"set-theoretic Yang Baxter",
                         compose(f1, compose(f2, f1)),
                         compose(f2, compose(f1, f2))});
  return p;
}

Presentation temperley_lieb_presentation(double delta) {
  Presentation p;
  p.name = "temperley_lieb";
  p.kind = StructureKind::associative_algebra;
  p.scalars["delta"] = delta;
  p.generators.push_back({"U", 2, 2, false, ""});

  p.relations.push_back({"U1 U2 U1 = U1",
                         compose(place("U", 1, 3), compose(place("U", 2, 3), place("U", 1, 3))),
                         place("U", 1, 3)});
  p.relations.push_back({"U2 U1 U2 = U2",
                         compose(place("U", 2, 3), compose(place("U", 1, 3), place("U", 2, 3))),
                         place("U", 2, 3)});
  p.relations.push_back({"U^2 = delta U",
                         compose(gen("U"), gen("U")),
                         scale_sym("delta", gen("U"))});
  return p;
}

Presentation yang_baxter_presentation() {
  Presentation p;
  p.name = "yang_baxter";
  p.kind = StructureKind::custom;
  p.generators.push_back({"R", 2, 2, true, "R_inv"});

  RelExprPtr r1 = product(gen("R"), id(1));
  RelExprPtr r2 = product(id(1), gen("R"));
  p.relations.push_back({"set-theoretic Yang Baxter",
                         compose(r1, compose(r2, r1)),
                         compose(r2, compose(r1, r2))});
  p.relations.push_back({"R∘inv(R)=id", compose(gen("R"), inv("R")), id(2)});
  p.relations.push_back({"inv(R)∘R=id", compose(inv("R"), gen("R")), id(2)});
  return p;
}

Presentation rt_system_presentation() {
  Presentation p;
  p.name = "rt_system";
  p.kind = StructureKind::custom;
  p.semantics = ProductSemantics::tensor;
  p.generators.push_back({"R", 2, 2, true, "R_inv"});
  p.generators.push_back({"n", 2, 0, false, ""});
  p.generators.push_back({"u", 0, 2, false, ""});

  p.relations.push_back({"n.R = n", compose(gen("n"), gen("R")), gen("n")});
  p.relations.push_back({"R.R^-1 = id", compose(gen("R"), inv("R")), id(2)});
  p.relations.push_back({"R^-1.R = id", compose(inv("R"), gen("R")), id(2)});

  RelExprPtr r1 = product(gen("R"), id(1));
  RelExprPtr r2 = product(id(1), gen("R"));
  p.relations.push_back({"Yang Baxter",
                         compose(r1, compose(r2, r1)),
                         compose(r2, compose(r1, r2))});

  p.relations.push_back({"(id⊗n)(R⊗id) = (n⊗id)(id⊗R)",
                         compose(product(id(1), gen("n")), product(gen("R"), id(1))),
                         compose(product(gen("n"), id(1)), product(id(1), gen("R")))});
  p.relations.push_back({"(id⊗n)(u⊗id) = id",
                         compose(product(id(1), gen("n")), product(gen("u"), id(1))),
                         id(1)});
  p.relations.push_back({"(n⊗id)(id⊗u) = id",
                         compose(product(gen("n"), id(1)), product(id(1), gen("u"))),
                         id(1)});
  return p;
}

}  // namespace

Presentation builtin(const std::string& name, const std::map<std::string, double>& params) {
  Presentation p;
  if (name == "braid") {
    p = braid_presentation();
  } else if (name == "temperley_lieb") {
    auto it = params.find("delta");
    if (it == params.end())
      throw std::invalid_argument("temperley_lieb requires scalar delta");
    p = temperley_lieb_presentation(it->second);
  } else if (name == "yang_baxter") {
    p = yang_baxter_presentation();
  } else if (name == "rt_system") {
    p = rt_system_presentation();
  } else {
    throw std::invalid_argument("unknown builtin " + name);
  }
  validate(p);
  return p;
}

std::vector<RelationEq> builtin_probes(const std::string& name) {
  using namespace expr;
  std::vector<RelationEq> probes;
  if (name == "braid" || name == "yang_baxter") {
    const std::string g = (name == "braid") ? "f" : "R";
    probes.push_back({"probe " + g + "=id", gen(g), id(2)});
    probes.push_back({"probe " + g + "=inv(" + g + ")", gen(g), inv(g)});
    probes.push_back({"probe " + g + "∘" + g + "=id", compose(gen(g), gen(g)), id(2)});
  } else if (name == "temperley_lieb") {
    probes.push_back({"probe U=id", gen("U"), id(2)});
    probes.push_back({"probe U=0", gen("U"), scale(0.0, gen("U"))});
  } else if (name == "rt_system") {
    probes.push_back({"probe R=id", gen("R"), id(2)});
    probes.push_back({"probe R∘R=id", compose(gen("R"), gen("R")), id(2)});
  } else {
    throw std::invalid_argument("unknown builtin " + name);
  }
  return probes;
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"braid", "temperley_lieb", "yang_baxter",
                                                 "rt_system"};
  return names;
}

}  // namespace repnet
