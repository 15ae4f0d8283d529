#include <gtest/gtest.h>

#include "shockline/plot.hpp"

namespace {

using namespace shockline::plot;

TEST(Plot, SvgEmbedsData) {
  Figure fig{"mu & rays", "t", "mu", {{"u=0", {0.0, 1.0}, {1.0, 0.5}}}, false};
  const auto svg = render_svg(fig);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("<!-- data"), std::string::npos);
  EXPECT_NE(svg.find("mu &amp; rays"), std::string::npos);
  EXPECT_EQ(svg.find("mu & rays"), std::string::npos);
}

TEST(Plot, EmptyAndLogFiguresRender) {
  EXPECT_NE(render_svg(Figure{"empty", "x", "y", {}, false}).find("</svg>"), std::string::npos);
  Figure fig{"log", "t", "g", {{"g", {0.0, 1.0, 2.0}, {1.0, 10.0, 100.0}}}, true};
  EXPECT_NE(render_svg(fig).find("polyline"), std::string::npos);
}

TEST(Plot, DeterministicOutput) {
  Figure fig{"a", "x", "y", {{"s", {0.0, 0.5}, {0.1, 0.3}}}, false};
  EXPECT_EQ(render_svg(fig), render_svg(fig));
}

}  // namespace
