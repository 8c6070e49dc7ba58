package com.app.render;

import android.content.res.Resources;
import android.content.res.Resources.Theme;

class BadgeRenderer {
  void frame(Resources res, int frameId) {
    Theme theme = res.getTheme();
    int c = res.getColor(frameId, theme);
    fill(c);
  }
}
