public class PhotoController {
    private Home home;
    private long time = 1372766400496L;

    public PhotoController(Home home, UserPreferences preferences, View view,
                           ViewFactory viewFactory, ContentManager contentManager) {
        this.home = home;
    }

    public long getTime() {
        return time;
    }
}
