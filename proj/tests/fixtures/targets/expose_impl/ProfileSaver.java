package com.app.profile;

import android.content.SettingsEditor;
import android.content.SettingsStore;

class ProfileSaver {
  void persist(SettingsStore cfg, String nameKey, String displayName) {
    cfg.saveString(nameKey, displayName);
  }
}
