#include "sgfem/reference_data.hpp"

#include <map>

namespace sgfem {

namespace {

const std::map<std::string, ReferenceTable>& tables() {
  static const std::map<std::string, ReferenceTable> t = {
      {"T1",
       {"T1",
        {{1, 605, {{{173, 1965.4}, {12, 2.0127}, {5, 1.0507}, {5, 1.0465}}}},
         {2, 1815, {{{531, 5333.3}, {15, 2.7340}, {6, 1.1279}, {6, 1.1236}}}},
         {3, 4235, {{{745, 9876.9}, {16, 2.9995}, {7, 1.1693}, {6, 1.1514}}}},
         {4, 8470, {{{902, 17150.2}, {17, 3.3413}, {7, 1.2131}, {7, 1.2028}}}},
         {5, 15246, {{{1033, 17275.8}, {18, 3.5891}, {7, 1.2447}, {7, 1.2434}}}},
         {6, 25410, {{{1037, 17333.5}, {18, 3.6349}, {7, 1.2501}, {7, 1.2559}}}},
         {7, 39930, {{{1040, 17348.9}, {19, 4.0993}, {8, 1.3202}, {7, 1.3146}}}},
         {8, 59895, {{{1081, 17360.6}, {19, 4.0597}, {8, 1.3198}, {7, 1.3182}}}}}}},
      {"T2",
       {"T2",
        {{1, 605, {{{134, 625.6}, {9, 1.6391}, {5, 1.0626}, {5, 1.0624}}}},
         {2, 1815, {{{315, 1903.2}, {13, 2.2379}, {6, 1.1117}, {6, 1.1109}}}},
         {3, 4235, {{{586, 5721.1}, {15, 2.8122}, {7, 1.1658}, {6, 1.1559}}}},
         {4, 8470, {{{902, 17150.2}, {17, 3.3413}, {7, 1.2131}, {7, 1.2028}}}},
         {5, 15246, {{{1402, 29751.0}, {18, 3.7824}, {7, 1.2538}, {7, 1.2426}}}},
         {6, 25410, {{{1943, 49842.4}, {19, 4.1534}, {8, 1.2921}, {7, 1.2798}}}},
         {7, 39930, {{{2568, 83056.6}, {20, 4.4708}, {8, 1.3219}, {7, 1.3125}}}},
         {8, 59895, {{{3267, 136419.0}, {20, 4.7371}, {8, 1.3472}, {7, 1.3398}}}}}}},
      {"T3",
       {"T3",
        {{0.05, 8470, {{{694, 15556.3}, {6, 1.0960}, {3, 1.0008}, {3, 1.0009}}}},
         {0.15, 8470, {{{739, 15673.2}, {9, 1.3514}, {4, 1.0090}, {4, 1.0089}}}},
         {0.25, 8470, {{{804, 15912.5}, {11, 1.7021}, {5, 1.0314}, {5, 1.0304}}}},
         {0.35, 8470, {{{833, 16286.1}, {13, 2.1808}, {6, 1.0770}, {5, 1.0664}}}},
         {0.45, 8470, {{{877, 16815.9}, {16, 2.8773}, {6, 1.1510}, {6, 1.1414}}}},
         {0.55, 8470, {{{926, 17539.6}, {19, 3.9523}, {8, 1.2948}, {7, 1.2830}}}}}}},
      {"T4",
       {"T4",
        {{1.0 / 5, 2520, {{{404, 4847.5}, {16, 3.2484}, {7, 1.2022}, {6, 1.1790}}}},
         {1.0 / 10, 8470, {{{902, 17150.2}, {17, 3.3413}, {7, 1.2131}, {7, 1.2028}}}},
         {1.0 / 15, 17920, {{{1386, 36716.6}, {17, 3.3145}, {7, 1.2063}, {7, 1.2047}}}},
         {1.0 / 20, 30870, {{{1883, 63535.2}, {17, 3.3463}, {7, 1.2110}, {7, 1.2032}}}},
         {1.0 / 25, 47320, {{{2383, 97605.6}, {17, 3.3473}, {7, 1.2112}, {7, 1.2032}}}},
         {1.0 / 30, 67270, {{{2872, 138929.0}, {17, 3.3190}, {7, 1.2070}, {7, 1.2054}}}}}}},
      {"T6",
       {"T6",
        {{1, 605, {{{585, 51376.4}, {48, 28.7589}, {15, 3.4192}, {15, 3.4000}}}},
         {2, 1815, {{{1396, 58718.8}, {61, 37.1593}, {17, 3.7490}, {16, 3.6244}}}},
         {3, 4235, {{{1770, 69054.8}, {62, 38.0715}, {17, 3.7380}, {16, 3.7632}}}},
         {4, 8470, {{{2016, 70143.6}, {66, 43.6525}, {19, 4.2935}, {16, 4.1669}}}}}}},
      {"T7",
       {"T7",
        {{1, 605, {{{134, 578.2}, {15, 3.4954}, {8, 1.3910}, {7, 1.3856}}}},
         {2, 1815, {{{329, 2027.3}, {28, 8.9450}, {12, 1.9742}, {10, 1.9289}}}},
         {3, 4235, {{{804, 10048.4}, {44, 20.0366}, {15, 2.8670}, {13, 2.7955}}}},
         {4, 8470, {{{2016, 70143.6}, {66, 43.6525}, {19, 4.2935}, {16, 4.1669}}}}}}},
      {"T8",
       {"T8",
        {{0.25, 8470, {{{719, 7378.4}, {16, 3.2356}, {7, 1.1761}, {7, 1.1776}}}},
         {0.50, 8470, {{{1039, 16014.8}, {29, 9.3553}, {11, 1.7685}, {10, 1.7836}}}},
         {0.75, 8470, {{{1511, 35317.3}, {46, 22.2147}, {15, 2.8198}, {13, 2.8454}}}},
         {1.00, 8470, {{{2016, 70143.6}, {66, 43.6525}, {19, 4.2935}, {16, 4.1669}}}},
         {1.25, 8470, {{{2591, 116678.0}, {85, 72.7584}, {23, 5.9776}, {19, 5.5362}}}},
         {1.50, 8470, {{{3209, 178890.0}, {103, 107.0670}, {26, 7.7459}, {21, 6.8507}}}}}}},
      {"T9",
       {"T9",
        {{1.0 / 5, 2520, {{{831, 17695.3}, {59, 40.6232}, {18, 3.9885}, {15, 3.8361}}}},
         {1.0 / 10, 8470, {{{2016, 70143.6}, {66, 43.6525}, {19, 4.2935}, {16, 4.1669}}}},
         {1.0 / 15, 17920, {{{3377, 158334.0}, {68, 44.4170}, {19, 4.3764}, {16, 4.2394}}}},
         {1.0 / 20, 30870, {{{4395, 275686.0}, {69, 44.8882}, {19, 4.3742}, {17, 4.2510}}}},
         {1.0 / 25, 47320, {{{5600, 429551.0}, {69, 44.9413}, {20, 4.3986}, {17, 4.2592}}}},
         {1.0 / 30, 67270, {{{7180, 626475.0}, {71, 45.1100}, {19, 4.3732}, {17, 4.2630}}}}}}},
  };
  return t;
}

}  // namespace

const ReferenceTable* reference_table(const std::string& name) {
  const auto& t = tables();
  auto it = t.find(name);
  return it == t.end() ? nullptr : &it->second;
}

const std::vector<WorkCount>& reference_work_counts() {
  static const std::vector<WorkCount> rows = {
      {13, 5, 8, 9},          {55, 15, 40, 29},      {155, 35, 120, 69},
      {350, 70, 280, 139},    {686, 126, 560, 251},  {1218, 210, 1008, 419},
      {2010, 330, 1680, 659}, {3135, 495, 2640, 989},
  };
  return rows;
}

}  // namespace sgfem
